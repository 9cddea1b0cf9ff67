"""The conformist subshift and its explicit configuration.

Every cell's bit must be the strict nonunanimous majority of its role
models, the coset one shift level down. Locally this is a finite list of
forbidden pictures on 1 + ell cells. The subshift is nonempty because of an
explicit configuration: read the lamp weights at or above the shift level
as base-ell digits (the horizontal coordinate) and take the digit-one
parity of that number.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .elements import Elem, identity_elem, role_models
from .groups import FiniteGroupTable
from .patterns import PartialConfig, Pattern, SftSpec
from .words import digit_one_parity, majority_bit

__all__ = [
    "horizontal_coord",
    "sigma0",
    "role_model_coords",
    "forbidden_patterns",
    "allowed_patterns",
    "conformist_spec",
    "sample_sigma0",
]


def horizontal_coord(g: Elem) -> int:
    """Lamp weights at positions >= shift, read as base-ell digits.

    Exact arbitrary-precision arithmetic: the value grows like ell^radius.
    Weights below the shift level do not contribute, which is what makes
    the sum finite and the identity-first weight convention load-bearing.
    """
    base = g.table.order
    k = g.shift
    total = 0
    for pos, val in g.lamp:
        if pos >= k:
            total += val * base ** (pos - k)
    return total


def sigma0(g: Elem) -> int:
    """The explicit configuration: digit-one parity of the horizontal coordinate."""
    return digit_one_parity(horizontal_coord(g), g.table.order)


def role_model_coords(g: Elem) -> list[int]:
    """Horizontal coordinates of the role models of g, in lamp-value order.

    As a set these are always the ell consecutive integers starting at
    ell * horizontal_coord(g).
    """
    return [horizontal_coord(h) for h in role_models(g)]


def forbidden_patterns(table: FiniteGroupTable) -> list[Pattern]:
    """All forbidden pictures on the cell set {identity} + role models of identity.

    An assignment is forbidden unless the role-model row has a strict
    nonunanimous majority equal to the center bit; each majority-bearing
    row permits exactly one of the 2^(ell+1) assignments.
    """
    if table.order < 3:
        raise ValueError(
            f"lamp group must have order at least 3, got {table.order}; "
            "a strict nonunanimous majority cannot exist among fewer voters"
        )
    center = identity_elem(table)
    row_cells = role_models(center)
    out = []
    for bits in itertools.product((0, 1), repeat=1 + table.order):
        center_bit, row = bits[0], bits[1:]
        if majority_bit(row) != center_bit:
            cells = [(center, center_bit)]
            cells.extend(zip(row_cells, row))
            out.append(Pattern(cells))
    return out


def allowed_patterns(table: FiniteGroupTable) -> list[Pattern]:
    """The complement census: assignments on the same cells that may occur.

    Exactly the pictures where the role-model row has a strict
    nonunanimous majority equal to the center bit — one per
    majority-bearing row.
    """
    if table.order < 3:
        raise ValueError(
            f"lamp group must have order at least 3, got {table.order}; "
            "a strict nonunanimous majority cannot exist among fewer voters"
        )
    center = identity_elem(table)
    row_cells = role_models(center)
    out = []
    for bits in itertools.product((0, 1), repeat=1 + table.order):
        center_bit, row = bits[0], bits[1:]
        if majority_bit(row) == center_bit:
            cells = [(center, center_bit)]
            cells.extend(zip(row_cells, row))
            out.append(Pattern(cells))
    return out


def conformist_spec(table: FiniteGroupTable) -> SftSpec:
    """The conformist subshift as a pattern system over the given lamp group."""
    return SftSpec(table, forbidden_patterns(table))


def sample_sigma0(domain: Iterable[Elem]) -> PartialConfig:
    """The explicit configuration restricted to a finite domain."""
    return PartialConfig((g, sigma0(g)) for g in domain)
