"""Finite patterns, pattern systems, and partial configurations.

A Pattern assigns bits to finitely many group elements; it is a forbidden
local picture. A configuration violates a pattern at g when the translate
by g matches every cell. Translates that stick out of a partial
configuration's domain are skipped: windows are checked only where fully
determined, so a SAT answer on a window never overclaims.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .elements import Elem, elem_key, format_element, inverse, multiply, parse_element
from .groups import FiniteGroupTable, table_from_dict

__all__ = [
    "Pattern",
    "SftSpec",
    "PartialConfig",
    "Verdict",
    "Violation",
    "violates_at",
    "is_admissible",
    "config_to_json",
    "config_from_json",
    "spec_to_json",
    "spec_from_json",
]


class Verdict(enum.Enum):
    VIOLATED = "violated"
    SATISFIED = "satisfied"
    UNDETERMINED = "undetermined"


class Pattern:
    """Bits on a finite, nonempty set of cells, stored in element order."""

    __slots__ = ("cells",)

    def __init__(self, cells: Iterable[tuple[Elem, int]]):
        pairs = sorted(cells, key=lambda cv: elem_key(cv[0]))
        if not pairs:
            raise ValueError("pattern needs at least one cell")
        for _, bit in pairs:
            if bit not in (0, 1):
                raise ValueError(f"pattern bits must be 0 or 1, got {bit!r}")
        for (a, _), (b, _) in zip(pairs, pairs[1:]):
            if a == b:
                raise ValueError(f"duplicate pattern cell {format_element(a)!r}")
        self.cells = tuple(pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.cells == other.cells

    def __hash__(self) -> int:
        return hash(tuple((elem_key(c), b) for c, b in self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        inner = ", ".join(f"{format_element(c)}={b}" for c, b in self.cells)
        return f"Pattern({inner})"


class SftSpec:
    """A lamp group together with a finite list of forbidden patterns.

    Majority needs three or more voters, so lamp groups of order below 3
    are rejected here.
    """

    __slots__ = ("table", "patterns")

    def __init__(self, table: FiniteGroupTable, patterns: Iterable[Pattern]):
        if table.order < 3:
            raise ValueError(
                f"lamp group must have order at least 3, got {table.order}; "
                "a strict nonunanimous majority cannot exist among fewer voters"
            )
        pats = []
        seen = set()
        for p in patterns:
            if p not in seen:
                seen.add(p)
                pats.append(p)
        self.table = table
        self.patterns = tuple(pats)

    def __repr__(self) -> str:
        return f"SftSpec({self.table.name}, {len(self.patterns)} patterns)"


class PartialConfig:
    """Immutable partial 0/1 labeling of group elements, iterated in element order."""

    __slots__ = ("_bits",)

    def __init__(self, assignments: Mapping[Elem, int] | Iterable[tuple[Elem, int]]):
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        bits = {}
        for elem, bit in items:
            if bit not in (0, 1):
                raise ValueError(f"config bits must be 0 or 1, got {bit!r}")
            if elem in bits and bits[elem] != bit:
                raise ValueError(f"conflicting bits for {format_element(elem)!r}")
            bits[elem] = bit
        self._bits = {g: bits[g] for g in sorted(bits, key=elem_key)}

    def get(self, elem: Elem) -> Optional[int]:
        return self._bits.get(elem)

    def __getitem__(self, elem: Elem) -> int:
        return self._bits[elem]

    def __contains__(self, elem: Elem) -> bool:
        return elem in self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[Elem]:
        return iter(self._bits)

    def items(self):
        return self._bits.items()

    def domain(self) -> list[Elem]:
        return list(self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialConfig):
            return NotImplemented
        return self._bits == other._bits

    def __repr__(self) -> str:
        return f"PartialConfig({len(self._bits)} cells)"


@dataclass(frozen=True)
class Violation:
    pattern_index: int
    translate: Elem


def violates_at(cfg: PartialConfig, pattern: Pattern, g: Elem) -> Verdict:
    """Does cfg match `pattern` translated by g?

    VIOLATED when every translated cell is in cfg and matches; SATISFIED as
    soon as one determined cell mismatches; UNDETERMINED when no mismatch
    is seen but some cell is missing.
    """
    undetermined = False
    for cell, bit in pattern.cells:
        v = cfg.get(multiply(g, cell))
        if v is None:
            undetermined = True
        elif v != bit:
            return Verdict.SATISFIED
    return Verdict.UNDETERMINED if undetermined else Verdict.VIOLATED


def is_admissible(cfg: PartialConfig, spec: SftSpec) -> tuple[bool, list[Violation]]:
    """Check every fully-contained pattern translate; report all violations.

    For each pattern, candidate translates are those placing the pattern's
    first cell on a domain cell; only translates with the whole support in
    the domain are judged.
    """
    violations = []
    domain = cfg.domain()
    for idx, pattern in enumerate(spec.patterns):
        anchor_inv = inverse(pattern.cells[0][0])
        for d in domain:
            g = multiply(d, anchor_inv)
            matched = True
            for cell, bit in pattern.cells:
                v = cfg.get(multiply(g, cell))
                if v is None or v != bit:
                    matched = False
                    break
            if matched:
                violations.append(Violation(idx, g))
    return not violations, violations


# ---------------------------------------------------------------------------
# JSON forms. Configs are lists of {"elem": text, "bit": 0|1}; pattern
# systems carry their group table inline so a file round-trips on its own.


def config_to_json(cfg: PartialConfig) -> str:
    rows = [{"elem": format_element(g), "bit": bit} for g, bit in cfg.items()]
    return json.dumps(rows, indent=2)


def config_from_json(table: FiniteGroupTable, text: str) -> PartialConfig:
    rows = json.loads(text)
    return PartialConfig((parse_element(table, r["elem"]), r["bit"]) for r in rows)


def spec_to_json(spec: SftSpec) -> str:
    return json.dumps(
        {
            "lambda": spec.table.to_dict(),
            "patterns": [
                [{"elem": format_element(c), "bit": b} for c, b in p.cells]
                for p in spec.patterns
            ],
        },
        indent=2,
    )


def spec_from_json(text: str) -> SftSpec:
    obj = json.loads(text)
    table = table_from_dict(obj["lambda"])
    patterns = [
        Pattern((parse_element(table, row["elem"]), row["bit"]) for row in rows)
        for rows in obj["patterns"]
    ]
    return SftSpec(table, patterns)
