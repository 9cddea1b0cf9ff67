"""Majority votes, digit-one parity, and the associated substitution.

The parity sequence (n -> parity of the count of 1 digits of n in base ell)
is the fixed point of a length-ell substitution on {0, 1}. Both are
implemented independently here and cross-checked in the tests: parity reads
digits arithmetically, the substitution rewrites words, and they must agree
letter by letter.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from ._kernels import digit_parity_bulk

__all__ = [
    "majority_bit",
    "digit_one_parity",
    "digit_one_parity_many",
    "substitution_image",
    "substitution_iterates",
]


def majority_bit(bits: Iterable[int]) -> Optional[int]:
    """Non-unanimous strict majority of a 0/1 tuple, or None.

    Returns the value held by more than half but fewer than all of the
    entries. Unanimity and ties return None; with one or two entries no
    value can qualify. Empty input is an error.
    """
    ones = 0
    total = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
        ones += b
        total += 1
    if total == 0:
        raise ValueError("majority of an empty tuple")
    for candidate, count in ((1, ones), (0, total - ones)):
        if 2 * count > total and count < total:
            return candidate
    return None


def digit_one_parity(n: int, base: int) -> int:
    """Parity of the number of digits equal to 1 in the base-`base` expansion of n.

    Exact for arbitrary Python integers.
    """
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    if n < 0:
        raise ValueError(f"defined for nonnegative n, got {n}")
    p = 0
    while n > 0:
        n, digit = divmod(n, base)
        if digit == 1:
            p ^= 1
    return p


def digit_one_parity_many(ns: Iterable[int], base: int, kernel: str | None = None) -> list[int]:
    """digit_one_parity over a batch; int64-sized values go through the bulk kernel."""
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    values = list(ns)
    if values and all(0 <= v <= np.iinfo(np.int64).max for v in values):
        arr = np.array(values, dtype=np.int64)
        return [int(b) for b in digit_parity_bulk(arr, base, kernel=kernel)]
    return [digit_one_parity(v, base) for v in values]


def substitution_image(word: str, base: int) -> str:
    """Apply the length-`base` substitution 0 -> 010...0, 1 -> 101...1.

    The image of 0 starts 01 and continues with 0s; the image of 1 is its
    complement. Words are plain strings over {'0', '1'}.
    """
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    image0 = "01" + "0" * (base - 2)
    image1 = "10" + "1" * (base - 2)
    out = []
    for ch in word:
        if ch == "0":
            out.append(image0)
        elif ch == "1":
            out.append(image1)
        else:
            raise ValueError(f"words are over '0'/'1', got {ch!r}")
    return "".join(out)


def substitution_iterates(base: int, count: int, start: str = "0") -> list[str]:
    """[image(start), image^2(start), ..., image^count(start)]."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    out = []
    w = start
    for _ in range(count):
        w = substitution_image(w, base)
        out.append(w)
    return out
