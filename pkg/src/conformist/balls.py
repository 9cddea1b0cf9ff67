"""Generating sets and metric balls in the lamplighter group."""

from __future__ import annotations

from .elements import Elem, elem_key, identity_elem, inverse, lamp_embed, multiply, t_power
from .groups import FiniteGroupTable

__all__ = ["BallSizeError", "generating_set", "ball", "DEFAULT_BALL_CAP"]

DEFAULT_BALL_CAP = 10**7

GENSET_CONVENTIONS = ("lamp-t", "symmetric")


class BallSizeError(RuntimeError):
    """Raised when a ball enumeration exceeds its element cap."""


def generating_set(table: FiniteGroupTable, convention: str = "lamp-t") -> list[Elem]:
    """Symmetric generating set under the named convention.

    lamp-t: every [v]_0 * t together with inverses. One step of the inverse
    kind is exactly a role-model move, so the role models of a ball(r)
    element stay inside ball(r+1).

    symmetric: t, t^-1 and the nonidentity lamps [v]_0 (already closed
    under inverses).

    The result is duplicate-free, sorted, and never contains the identity.
    """
    if convention not in GENSET_CONVENTIONS:
        raise ValueError(f"unknown genset convention {convention!r}")
    gens: set[Elem] = set()
    if convention == "lamp-t":
        for val in range(table.order):
            g = multiply(lamp_embed(table, val, 0), t_power(table, 1))
            gens.add(g)
            gens.add(inverse(g))
    else:
        gens.add(t_power(table, 1))
        gens.add(t_power(table, -1))
        for val in range(1, table.order):
            gens.add(lamp_embed(table, val, 0))
    return sorted(gens, key=elem_key)


def ball(
    table: FiniteGroupTable,
    radius: int,
    gens: list[Elem] | None = None,
    cap: int = DEFAULT_BALL_CAP,
) -> list[Elem]:
    """All products of at most radius generators, sorted.

    Breadth-first closure from the identity; raises BallSizeError as soon
    as the element count passes cap.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if gens is None:
        gens = generating_set(table)
    seen: set[Elem] = {identity_elem(table)}
    frontier = sorted(seen, key=elem_key)
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise BallSizeError(
                            f"ball enumeration exceeded cap of {cap} elements"
                        )
        frontier = sorted(nxt, key=elem_key)
        if not frontier:
            break
    return sorted(seen, key=elem_key)
