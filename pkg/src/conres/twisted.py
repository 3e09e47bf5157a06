"""Dimension vectors indexed by (homological degree, Tate twist)."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

Key = tuple[int, int]


class TwistedDims(Mapping[Key, int]):
    """Finitely supported ``(degree, twist) -> positive dimension``.

    Immutable; zero entries are dropped on construction and negative
    dimensions are rejected.
    """

    __slots__ = ("_d",)

    def __init__(self, data: Mapping[Key, int] | Iterable[tuple[Key, int]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        d: dict[Key, int] = {}
        for (i, m), n in items:
            key = (int(i), int(m))
            d[key] = d.get(key, 0) + int(n)
        for key, n in d.items():
            if n < 0:
                raise ValueError(f"negative dimension {n} at {key}")
        self._d = {k: d[k] for k in sorted(d) if d[k]}

    @classmethod
    def single(cls, degree: int, twist: int, dim: int = 1) -> "TwistedDims":
        return cls({(degree, twist): dim})

    def __getitem__(self, key: Key) -> int:
        return self._d.get(tuple(key), 0)

    def __iter__(self) -> Iterator[Key]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other) -> bool:
        if isinstance(other, TwistedDims):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == TwistedDims(other)._d
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._d.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"({i},{m}):{n}" for (i, m), n in self._d.items())
        return "TwistedDims({" + body + "})"

    def __add__(self, other: "TwistedDims") -> "TwistedDims":
        return TwistedDims(list(self._d.items()) + list(other._d.items()))

    def minus(self, other: Mapping[Key, int]) -> "TwistedDims":
        out = dict(self._d)
        for k, n in other.items():
            out[k] = out.get(k, 0) - n
            if out[k] < 0:
                raise ValueError(f"cannot subtract {n} at {k}: only {self[k]} present")
        return TwistedDims(out)

    def shift(self, degree: int, twist: int) -> "TwistedDims":
        return TwistedDims({(i + degree, m + twist): n for (i, m), n in self._d.items()})

    def tensor(self, other: "TwistedDims") -> "TwistedDims":
        return TwistedDims(
            ((i + j, m + s), a * b)
            for (i, m), a in self._d.items()
            for (j, s), b in other._d.items()
        )

    def total_dim(self) -> int:
        return sum(self._d.values())

    def twists(self) -> set[int]:
        return {m for _, m in self._d}

    def at_twist(self, m: int) -> dict[int, int]:
        return {i: n for (i, t), n in self._d.items() if t == m}

    def euler_by_twist(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (i, m), n in self._d.items():
            out[m] = out.get(m, 0) + (-1) ** (i % 2) * n
        return {m: v for m, v in out.items() if v}

    def to_json(self) -> list[dict]:
        return [{"degree": i, "twist": m, "dim": n} for (i, m), n in self._d.items()]

    @classmethod
    def from_json(cls, obj) -> "TwistedDims":
        if isinstance(obj, Mapping):
            # {"i,m": n} compact form
            return cls({tuple(int(x) for x in k.split(",")): v for k, v in obj.items()})
        return cls({(e["degree"], e["twist"]): e.get("dim", 1) for e in obj})

    def describe(self) -> str:
        if not self._d:
            return "0"
        parts = []
        for (i, m), n in self._d.items():
            q = f"Q({m})" if n == 1 else f"Q({m})^{n}"
            parts.append(f"H{i}={q}")
        return ", ".join(parts)


EMPTY = TwistedDims()
