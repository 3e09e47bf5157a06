"""Reference polynomials quoted as results without a derivation in the source data."""

from __future__ import annotations

from ..hodgepoly import MHPolynomial, parse_poly

_MODULI = "1 + t^2*(uv)^-1 + t^4*(uv)^-2 + t^6*(uv)^-3"

REFERENCE_POLYNOMIALS = {
    "quartic-moduli": _MODULI,
    "cubic-surface-moduli": _MODULI,
}


def reference_polynomial(name: str) -> MHPolynomial:
    """A stored reference polynomial, or the expected polynomial of a bundled case."""
    if name in REFERENCE_POLYNOMIALS:
        return parse_poly(REFERENCE_POLYNOMIALS[name])
    from .loader import CaseError, load_case

    case = load_case(name)
    if case.expected is None:
        raise CaseError(f"case {name!r} has no reference polynomial")
    return case.expected
