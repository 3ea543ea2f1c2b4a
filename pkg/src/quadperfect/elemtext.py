"""Text grammar for ring elements.

Accepted forms (whitespace ignored): ``INT``, ``[INT]s``, ``INT+[INT]s``,
``INT-[INT]s``, and the half form ``(INT+[INT]s)/2`` for the rings where half
coordinates exist.  ``s`` stands for sqrt(d) of the ring in context; ``i`` is
accepted as an alias when d = -1.  An omitted coefficient means 1.  Formatting
an element always prints the coefficient (``2-1s``) and uses the half form
exactly when the coordinates are odd, so parse(format(z)) == z.
"""

from __future__ import annotations

import re

from .ring import QuadInt

_INT = r"[+-]?\d+"
_COEF = r"[+-]\d*|\d*"
_FULL = re.compile(rf"^(?:({_INT})(?=[+-]|$))?(?:({_COEF})[si])?$")
_HALF = re.compile(rf"^\(({_INT})([+-]\d*)[si]\)/2$")


class ElementParseError(ValueError):
    """The text is not a valid element of the ring in context."""


def _coef(text: str) -> int:
    if text in ("", "+"):
        return 1
    if text == "-":
        return -1
    return int(text)


def parse_element(d: int, text: str) -> QuadInt:
    """Parse element text for the ring of d; raises ElementParseError on bad input."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ElementParseError("empty element text")
    if "i" in compact and d != -1:
        raise ElementParseError(f"'i' is only meaningful for d=-1, not d={d}")
    m = _HALF.match(compact)
    if m:
        try:
            return QuadInt(d, int(m.group(1)), _coef(m.group(2)), half=True)
        except ValueError as exc:
            raise ElementParseError(str(exc)) from None
    m = _FULL.match(compact)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ElementParseError(f"cannot parse element text {text!r}")
    a = int(m.group(1)) if m.group(1) is not None else 0
    b = _coef(m.group(2)) if m.group(2) is not None else 0
    try:
        return QuadInt(d, a, b)
    except ValueError as exc:
        raise ElementParseError(str(exc)) from None


def format_element(z: QuadInt) -> str:
    """Canonical text for z; inverse of parse_element for the same ring."""
    return str(z)
