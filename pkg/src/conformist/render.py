"""Deterministic DOT rendering of labeled windows in the group.

Vertices are group elements named by the textual element syntax and
arranged in horizontal layers of equal shift; edges connect g to g*s for
the supplied generators. A partial 0/1 labeling controls the fill: bit 0
draws an unfilled circle, bit 1 a filled one, and unlabeled cells come
out dashed gray. Output is byte-identical for identical inputs.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .elements import Elem, elem_key, format_element, multiply
from .patterns import PartialConfig

_INDENT = "  "


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(
    domain: Iterable[Elem],
    gens: Iterable[Elem],
    labels: Optional[PartialConfig] = None,
    graph_label: str = "",
) -> str:
    """DOT text for the window, its generator moves, and a labeling.

    Only edges with both endpoints inside the window are drawn; each
    unordered pair appears once. Same-shift edges carry constraint=false
    so the shift layering survives layout.
    """
    cells = sorted(set(domain), key=elem_key)
    ids = {g: f"n{i}" for i, g in enumerate(cells)}
    cellset = set(cells)

    lines = ["digraph lamp_window {"]
    lines.append(_INDENT + "graph [rankdir=BT, splines=true, fontname=\"Helvetica\"];")
    lines.append(_INDENT + "node [shape=circle, fontname=\"Helvetica\", margin=0.02];")
    lines.append(_INDENT + "edge [dir=none];")
    if graph_label:
        lines.append(_INDENT + f"label={_quote(graph_label)};")
        lines.append(_INDENT + "labelloc=t;")

    for g in cells:
        bit = labels.get(g) if labels is not None else None
        if bit == 0:
            style = 'style=solid, fillcolor="white"'
        elif bit == 1:
            style = 'style=filled, fillcolor="black", fontcolor="white"'
        else:
            style = 'style=dashed, color="gray50", fontcolor="gray50"'
        lines.append(_INDENT + f"{ids[g]} [label={_quote(format_element(g))}, {style}];")

    by_shift: dict[int, list[Elem]] = {}
    for g in cells:
        by_shift.setdefault(g.shift, []).append(g)
    for shift in sorted(by_shift, reverse=True):
        names = " ".join(ids[g] for g in by_shift[shift])
        lines.append(_INDENT + f"{{ rank=same; {names} }}")

    edges = set()
    for g in cells:
        for s in gens:
            h = multiply(g, s)
            if h == g or h not in cellset:
                continue
            a, b = sorted((g, h), key=elem_key)
            edges.add((a, b))
    for a, b in sorted(edges, key=lambda ab: (elem_key(ab[0]), elem_key(ab[1]))):
        lo, hi = (a, b) if a.shift <= b.shift else (b, a)
        attrs = " [constraint=false]" if lo.shift == hi.shift else ""
        lines.append(_INDENT + f"{ids[lo]} -> {ids[hi]}{attrs};")

    lines.append("}")
    return "\n".join(lines) + "\n"
