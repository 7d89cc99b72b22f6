"""Dyadic resolutions and grids.

Resolutions are powers of two, written ``2^-k`` on the command line and
stored as exact binary floats, so identical runs are bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgument

MAX_EXPONENT = 16


def is_dyadic(eps: float) -> bool:
    """True iff eps equals 2**-k for an integer 0 <= k <= MAX_EXPONENT."""
    if not (0 < eps <= 1):
        return False
    mantissa, exponent = math.frexp(eps)
    return mantissa == 0.5 and -MAX_EXPONENT <= exponent - 1 <= 0


def exponent_of(eps: float) -> int:
    """Return k with eps == 2**-k, or raise InvalidArgument."""
    if not is_dyadic(eps):
        raise InvalidArgument(f"resolution {eps!r} is not dyadic (need 2^-k)")
    return -(math.frexp(eps)[1] - 1)


def parse_epsilon(text: str) -> float:
    """Parse the exact CLI syntax ``2^-k`` (also accepts ``1``)."""
    text = text.strip()
    if text == "1":
        return 1.0
    if text.startswith("2^-"):
        tail = text[3:]
        if tail.isdigit():
            k = int(tail)
            if 0 <= k <= MAX_EXPONENT:
                return 2.0 ** -k
    raise InvalidArgument(f"epsilon must be written as 2^-k, got {text!r}")


def format_epsilon(eps: float) -> str:
    return "1" if eps == 1.0 else f"2^-{exponent_of(eps)}"


def grid(step: float, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Exact dyadic grid lo, lo+step, ..., hi (endpoints included)."""
    if not is_dyadic(step):
        raise InvalidArgument(f"grid step {step!r} is not dyadic")
    count = round((hi - lo) / step)
    return lo + step * np.arange(count + 1, dtype=float)
