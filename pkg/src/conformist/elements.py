"""Lamplighter group elements in normal form.

The group is the semidirect product of the direct sum of copies of a finite
lamp group (one copy per integer position) with the integers acting by
translation. An element is written uniquely as a lamp configuration times a
power of the shift t, where conjugation by t moves a lamp one position up:
t [v]_i t^-1 = [v]_{i+1}.

A lamp configuration is stored sparsely as a tuple of (position, value)
pairs with strictly increasing positions and nonzero values (value 0 is the
lamp group identity and is never stored).
"""

from __future__ import annotations

import re
from typing import Iterable

from .groups import FiniteGroupTable

__all__ = [
    "Lamp",
    "Elem",
    "ElementSyntaxError",
    "lamp_from_pairs",
    "lamp_mul",
    "lamp_inv",
    "lamp_shift",
    "identity_elem",
    "lamp_embed",
    "t_power",
    "multiply",
    "inverse",
    "role_models",
    "elem_key",
    "format_element",
    "parse_element",
]

# Sparse lamp configuration: ((pos, val), ...) sorted by pos, vals nonzero.
Lamp = tuple

EMPTY_LAMP: Lamp = ()


class ElementSyntaxError(ValueError):
    """Raised when element text does not parse."""


def lamp_from_pairs(table: FiniteGroupTable, pairs: Iterable[tuple[int, int]]) -> Lamp:
    """Canonicalize (position, value) pairs into a Lamp.

    Repeated positions are rejected rather than multiplied; build products
    with lamp_mul so the order of combination is explicit.
    """
    out = []
    seen = set()
    for pos, val in pairs:
        if pos in seen:
            raise ValueError(f"duplicate lamp position {pos}")
        seen.add(pos)
        if not 0 <= val < table.order:
            raise ValueError(f"lamp value {val} out of range for order {table.order}")
        if val != 0:
            out.append((pos, val))
    out.sort()
    return tuple(out)


def lamp_mul(table: FiniteGroupTable, a: Lamp, b: Lamp) -> Lamp:
    """Pointwise product of two lamp configurations, a's values on the left."""
    mult = table.mult
    out = []
    i, j = 0, 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        pa, va = a[i]
        pb, vb = b[j]
        if pa < pb:
            out.append(a[i])
            i += 1
        elif pb < pa:
            out.append(b[j])
            j += 1
        else:
            v = mult[va][vb]
            if v != 0:
                out.append((pa, v))
            i += 1
            j += 1
    if i < na:
        out.extend(a[i:])
    if j < nb:
        out.extend(b[j:])
    return tuple(out)


def lamp_inv(table: FiniteGroupTable, a: Lamp) -> Lamp:
    inv = table.inv
    return tuple((pos, inv[val]) for pos, val in a)


def lamp_shift(a: Lamp, k: int) -> Lamp:
    """Translate every lamp k positions up (conjugation by t^k)."""
    if k == 0:
        return a
    return tuple((pos + k, val) for pos, val in a)


def lamp_value_at(a: Lamp, pos: int) -> int:
    for p, v in a:
        if p == pos:
            return v
        if p > pos:
            break
    return 0


class Elem:
    """Group element in normal form: lamp configuration times t^shift."""

    __slots__ = ("table", "lamp", "shift")

    def __init__(self, table: FiniteGroupTable, lamp: Lamp = EMPTY_LAMP, shift: int = 0):
        self.table = table
        self.lamp = lamp
        self.shift = shift

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Elem):
            return NotImplemented
        return (
            self.shift == other.shift
            and self.lamp == other.lamp
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.lamp, self.shift))

    def __lt__(self, other: "Elem") -> bool:
        return (self.shift, self.lamp) < (other.shift, other.lamp)

    def __mul__(self, other: "Elem") -> "Elem":
        return multiply(self, other)

    def __repr__(self) -> str:
        return f"<{format_element(self)}>"

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and not self.lamp


def elem_key(g: Elem) -> tuple:
    """Total order key: lexicographic on (shift, lamp entries)."""
    return (g.shift, g.lamp)


def identity_elem(table: FiniteGroupTable) -> Elem:
    return Elem(table, EMPTY_LAMP, 0)


def lamp_embed(table: FiniteGroupTable, val: int, pos: int) -> Elem:
    """The single lamp [val]_pos as a group element."""
    if not 0 <= val < table.order:
        raise ValueError(f"lamp value {val} out of range for order {table.order}")
    if val == 0:
        return Elem(table, EMPTY_LAMP, 0)
    return Elem(table, ((pos, val),), 0)


def t_power(table: FiniteGroupTable, k: int) -> Elem:
    return Elem(table, EMPTY_LAMP, k)


def multiply(a: Elem, b: Elem) -> Elem:
    """(mu t^k)(nu t^j) = mu * shift_k(nu) t^(k+j)."""
    if a.table != b.table:
        raise ValueError("elements live over different lamp groups")
    return Elem(
        a.table,
        lamp_mul(a.table, a.lamp, lamp_shift(b.lamp, a.shift)),
        a.shift + b.shift,
    )


def inverse(g: Elem) -> Elem:
    """(mu t^k)^-1 = shift_{-k}(mu^-1) t^-k."""
    return Elem(g.table, lamp_shift(lamp_inv(g.table, g.lamp), -g.shift), -g.shift)


def role_models(g: Elem) -> list[Elem]:
    """The coset g t^-1 Lambda_0, in lamp-value order.

    These are the cells whose majority is required to reproduce the value
    at g. Element j of the list is g * t^-1 * [j]_0 = g * [j]_{-1} t^-1.
    """
    table = g.table
    k = g.shift - 1
    base = lamp_value_at(g.lamp, k)
    rest = tuple(e for e in g.lamp if e[0] != k)
    out = []
    for val in range(table.order):
        v = table.mult[base][val]
        if v != 0:
            lamp = lamp_mul(table, rest, ((k, v),))
        else:
            lamp = rest
        out.append(Elem(table, lamp, k))
    return out


# ---------------------------------------------------------------------------
# Element text syntax: 'e', 't^k', 'a<val>@<pos>', joined with '*'.

_TOKEN_T = re.compile(r"^t(?:\^(-?\d+))?$")
_TOKEN_LAMP = re.compile(r"^a(\d+)@(-?\d+)$")


def format_element(g: Elem) -> str:
    """Canonical text: lamps in position order, then the shift."""
    parts = [f"a{val}@{pos}" for pos, val in g.lamp]
    if g.shift != 0:
        parts.append(f"t^{g.shift}")
    if not parts:
        return "e"
    return " * ".join(parts)


def parse_element(table: FiniteGroupTable, text: str) -> Elem:
    """Parse element text, multiplying tokens left to right."""
    if not text or not text.strip():
        raise ElementSyntaxError("empty element text")
    out = identity_elem(table)
    for token in text.split("*"):
        token = token.strip()
        if not token:
            raise ElementSyntaxError(f"empty factor in {text!r}")
        if token == "e":
            continue
        m = _TOKEN_T.match(token)
        if m:
            k = int(m.group(1)) if m.group(1) is not None else 1
            out = multiply(out, t_power(table, k))
            continue
        m = _TOKEN_LAMP.match(token)
        if m:
            val, pos = int(m.group(1)), int(m.group(2))
            if val >= table.order:
                raise ElementSyntaxError(
                    f"lamp value {val} out of range for order {table.order}"
                )
            out = multiply(out, lamp_embed(table, val, pos))
            continue
        raise ElementSyntaxError(f"bad element token {token!r}")
    return out
