"""Exact rational scalars.

Every predicate in this package runs on arbitrary-precision rationals, so
the rational type *is* the hot kernel.  When gmpy2 is importable its
GMP-backed ``mpq`` is used (compiled core, ~10x faster); otherwise the
pure-Python ``fractions.Fraction``.  The two are semantically identical
(arithmetic, ordering, hashing, str all agree), so the choice never
affects results, only speed.  Force a backend with SVMAP_RATIONAL=gmp or
SVMAP_RATIONAL=fraction; the default is "auto".
"""

from __future__ import annotations

import numbers
import os
from fractions import Fraction

_requested = os.environ.get("SVMAP_RATIONAL", "auto").lower()
if _requested not in ("auto", "gmp", "fraction"):
    raise RuntimeError(
        f"SVMAP_RATIONAL must be auto, gmp or fraction, not {_requested!r}"
    )

BACKEND = "fraction"
_make = Fraction
if _requested in ("auto", "gmp"):
    try:
        from gmpy2 import mpq as _mpq  # type: ignore

        _make = _mpq
        BACKEND = "gmp"
    except ImportError:
        if _requested == "gmp":
            raise


def rat(num, den=None):
    """Build an exact rational from ints, a rational, or exact text."""
    if den is not None:
        return _make(num, den)
    if isinstance(num, str):
        return parse_rational(num)
    if isinstance(num, float):
        raise TypeError("refusing float input; pass exact text or a rational")
    return _make(num)


def parse_rational(text: str):
    """Parse 'a', 'a/b' or a terminating decimal like '-0.25', exactly."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num_s, _, den_s = s.partition("/")
        num, den = int(num_s), int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return _make(num, den)
    if "." in s:
        int_s, _, frac_s = s.partition(".")
        sign = -1 if int_s.strip().startswith("-") else 1
        whole = int(int_s) if int_s not in ("", "-", "+") else 0
        if not frac_s.isdigit():
            raise ValueError(f"bad decimal literal {text!r}")
        scale = 10 ** len(frac_s)
        return _make(whole * scale + sign * int(frac_s), scale)
    return _make(int(s))


def rat_str(x) -> str:
    """Canonical text form: 'n' or 'n/d' (identical for both backends)."""
    return str(x)


def rat_floor(x) -> int:
    n, d = int(x.numerator), int(x.denominator)
    return n // d


def rat_ceil(x) -> int:
    n, d = int(x.numerator), int(x.denominator)
    return -((-n) // d)


def is_rational(x) -> bool:
    return isinstance(x, (int, numbers.Rational))


ZERO = rat(0)
ONE = rat(1)
