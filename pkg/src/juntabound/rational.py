"""Exact-rational helpers shared by the table exporters.

Bounds in this package are always ``fractions.Fraction``. When a number has
to leave the process it is written either exactly (``"num/den"``) or as a
decimal rounded *up*, so that a printed value is never smaller than the
bound it stands for.
"""

from __future__ import annotations

from fractions import Fraction


def frac_str(x: Fraction | int) -> str:
    """Serialize as ``"num/den"``; integers keep an explicit ``/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    """Inverse of :func:`frac_str`. Also accepts a bare integer."""
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    if sep and not den:
        raise ValueError(f"malformed rational {s!r}")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {s!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(n, d)


def ceil_decimal(x: Fraction | int, digits: int) -> str:
    """Render ``x`` with ``digits`` fractional digits, rounding toward +inf.

    >>> ceil_decimal(Fraction(1, 3), 3)
    '0.334'
    >>> ceil_decimal(Fraction(-1, 3), 3)
    '-0.333'
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = Fraction(x)
    scale = 10**digits
    # ceil(x * scale) without floats
    q = -((-x.numerator * scale) // x.denominator)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{digits}d}"
