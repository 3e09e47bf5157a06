"""Loading and structural checks of case files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..hodgepoly import MHPolynomial, PolynomialError, parse_poly
from .schema import schema_errors


class CaseError(ValueError):
    pass


class CaseSchemaError(CaseError):
    def __init__(self, source: str, errors: list[str]):
        self.errors = errors
        super().__init__(f"{source}: " + "; ".join(errors))


@dataclass(frozen=True)
class CaseStudy:
    name: str
    raw: dict
    source: str

    @property
    def ambient_dim(self) -> int:
        return self.raw["ambient_dim"]

    @property
    def vanishing_bound(self) -> int | None:
        return self.raw.get("vanishing_bound")

    @property
    def complete(self) -> bool:
        return self.raw["status"] == "complete"

    @property
    def expected(self) -> MHPolynomial | None:
        text = self.raw.get("expected")
        return None if text is None else parse_poly(text)

    def to_json(self) -> dict:
        return json.loads(json.dumps(self.raw))


def _data_dir():
    return resources.files(__package__).joinpath("data")


def case_names() -> list[str]:
    return sorted(p.name[:-5] for p in _data_dir().iterdir() if p.name.endswith(".json"))


def load_case(name_or_path: str | Path) -> CaseStudy:
    """Load a bundled case by name, or any case file by path."""
    text_name = str(name_or_path)
    path = Path(text_name)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise CaseError(f"no such case file: {path}")
        source, text = str(path), path.read_text()
    else:
        res = _data_dir().joinpath(f"{text_name}.json")
        if not res.is_file():
            raise CaseError(f"unknown case {text_name!r}; bundled cases: {', '.join(case_names())}")
        source, text = text_name, res.read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseSchemaError(source, [f"/: invalid JSON ({exc})"]) from None
    return case_from_json(raw, source)


def case_from_json(raw, source: str = "<memory>") -> CaseStudy:
    errs = schema_errors(raw)
    if errs:
        raise CaseSchemaError(source, errs)
    errs = _invariant_errors(raw)
    if errs:
        raise CaseSchemaError(source, errs)
    return CaseStudy(raw["name"], raw, source)


def _invariant_errors(raw) -> list[str]:
    errs = []
    strata, columns = raw["strata"], raw["columns"]
    if len(columns) != len(strata):
        errs.append(f"/columns: {len(columns)} columns for {len(strata)} strata")
    d_of = {s["index"]: s["d"] for s in strata}
    for k, col in enumerate(columns):
        if col["p"] in d_of and d_of[col["p"]] != col["d"]:
            errs.append(f"/columns/{k}/d: {col['d']} differs from stratum {col['p']} d = {d_of[col['p']]}")
    ps = [c["p"] for c in columns]
    if len(set(ps)) != len(ps):
        errs.append("/columns: repeated column index")
    names = [inst["name"] for inst in raw.get("inference", [])]
    if len(set(names)) != len(names):
        errs.append("/inference: repeated instance name")
    if raw.get("expected") is not None:
        try:
            parse_poly(raw["expected"])
        except PolynomialError as exc:
            errs.append(f"/expected: {exc}")
    if raw["status"] == "complete" and raw.get("expected") is None:
        errs.append("/expected: a complete case needs an expected polynomial")
    return errs
