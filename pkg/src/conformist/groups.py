"""Finite groups as explicit multiplication tables.

Elements are indices 0..order-1 and index 0 is always the identity. The
weight of element i is i itself, so the identity is the unique element of
weight zero. Everything downstream (lamp configurations, the coordinate
map, forbidden patterns) leans on that convention.
"""

from __future__ import annotations

import json
from typing import Sequence

__all__ = [
    "FiniteGroupTable",
    "GroupSpecError",
    "cyclic_table",
    "product_table",
    "table_from_dict",
    "parse_group_spec",
]


class GroupSpecError(ValueError):
    """Raised for malformed group tables or unparseable group specs."""


class FiniteGroupTable:
    """A finite group given by its full multiplication table.

    mult[a][b] is the product a*b, inv[a] the inverse of a. The table is
    validated on construction: closure, identity at index 0, correct
    inverses, and full associativity (order^3 triples, cheap at the sizes
    this library targets).
    """

    __slots__ = ("order", "mult", "inv", "name", "_hash")

    def __init__(self, mult: Sequence[Sequence[int]], name: str = ""):
        mult = tuple(tuple(row) for row in mult)
        n = len(mult)
        if n == 0:
            raise GroupSpecError("empty multiplication table")
        for a, row in enumerate(mult):
            if len(row) != n:
                raise GroupSpecError(f"row {a} has length {len(row)}, expected {n}")
            for b, v in enumerate(row):
                if not isinstance(v, int) or not 0 <= v < n:
                    raise GroupSpecError(f"mult[{a}][{b}] = {v!r} is not an index in 0..{n - 1}")
        for a in range(n):
            if mult[0][a] != a or mult[a][0] != a:
                raise GroupSpecError("index 0 is not a two-sided identity")
        inv = [-1] * n
        for a in range(n):
            for b in range(n):
                if mult[a][b] == 0 and mult[b][a] == 0:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise GroupSpecError(f"element {a} has no inverse")
        for a in range(n):
            for b in range(n):
                ab = mult[a][b]
                for c in range(n):
                    if mult[ab][c] != mult[a][mult[b][c]]:
                        raise GroupSpecError(f"associativity fails at ({a}, {b}, {c})")
        self.order = n
        self.mult = mult
        self.inv = tuple(inv)
        self.name = name or f"table:{n}"
        self._hash = hash((n, mult))

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    @property
    def is_abelian(self) -> bool:
        m = self.mult
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(self.order))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroupTable):
            return NotImplemented
        return self.mult == other.mult

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroupTable({self.name}, order={self.order})"

    def to_dict(self) -> dict:
        """JSON-ready form: {order, mult, inv, identity, name}."""
        return {
            "order": self.order,
            "mult": [list(row) for row in self.mult],
            "inv": list(self.inv),
            "identity": 0,
            "name": self.name,
        }


def cyclic_table(m: int) -> FiniteGroupTable:
    """The cyclic group of order m, written additively."""
    if m < 1:
        raise GroupSpecError(f"cyclic group order must be positive, got {m}")
    mult = [[(a + b) % m for b in range(m)] for a in range(m)]
    return FiniteGroupTable(mult, name=f"cyclic:{m}")


def product_table(left: FiniteGroupTable, right: FiniteGroupTable) -> FiniteGroupTable:
    """Direct product; pair (a, b) is encoded as a * right.order + b.

    The identity (0, 0) lands at index 0, keeping the identity-first
    convention for free.
    """
    n = right.order
    size = left.order * n
    mult = [[0] * size for _ in range(size)]
    for a1 in range(left.order):
        for b1 in range(n):
            i = a1 * n + b1
            for a2 in range(left.order):
                for b2 in range(n):
                    mult[i][a2 * n + b2] = left.mult[a1][a2] * n + right.mult[b1][b2]
    return FiniteGroupTable(mult, name=f"product:{left.name}x{right.name}")


def table_from_dict(obj: dict) -> FiniteGroupTable:
    """Build a table from its JSON form, rejecting identity != 0."""
    if not isinstance(obj, dict) or "mult" not in obj:
        raise GroupSpecError("group JSON must be an object with a 'mult' field")
    if obj.get("identity", 0) != 0:
        raise GroupSpecError("identity must sit at index 0")
    table = FiniteGroupTable(obj["mult"], name=obj.get("name", ""))
    if "order" in obj and obj["order"] != table.order:
        raise GroupSpecError(f"declared order {obj['order']} != table size {table.order}")
    if "inv" in obj and tuple(obj["inv"]) != table.inv:
        raise GroupSpecError("declared inverse list disagrees with the table")
    return table


def parse_group_spec(spec: str) -> FiniteGroupTable:
    """Parse 'cyclic:<m>', 'product:<spec>x<spec>x...', or inline JSON.

    Product factors must themselves be cyclic:<m> specs; arbitrary tables
    come in through the JSON form instead.
    """
    spec = spec.strip()
    if spec.startswith("{"):
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise GroupSpecError(f"bad group JSON: {exc}") from exc
        return table_from_dict(obj)
    if spec.startswith("cyclic:"):
        body = spec[len("cyclic:"):]
        try:
            m = int(body)
        except ValueError:
            raise GroupSpecError(f"bad cyclic order {body!r}") from None
        return cyclic_table(m)
    if spec.startswith("product:"):
        factors = spec[len("product:"):].split("x")
        if len(factors) < 2:
            raise GroupSpecError("product spec needs at least two factors")
        tables = [parse_group_spec(f) for f in factors]
        if any(not t.name.startswith("cyclic:") for t in tables):
            raise GroupSpecError("product factors must be cyclic:<m> specs")
        out = tables[0]
        for t in tables[1:]:
            out = product_table(out, t)
        return out
    raise GroupSpecError(f"unrecognized group spec {spec!r}")
