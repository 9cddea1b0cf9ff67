"""Randomized and exhaustive property suite over the whole library.

Each property runs independently, counts its checks, and collects
human-readable counterexamples; the CLI turns a failed report into a
nonzero exit. A mutation mode flips one reference bit before the
configuration-level properties run, as a sensitivity check that the
suite actually detects corruption.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .aperiodicity import decompose, make_sum_kernel
from .balls import ball
from .elements import (
    Elem,
    format_element,
    identity_elem,
    inverse,
    lamp_embed,
    lamp_from_pairs,
    lamp_mul,
    multiply,
    parse_element,
    role_models,
    t_power,
)
from .engine import SearchLimits, complete_search, invariant_search, tail_invariance_audit
from .groups import FiniteGroupTable
from .patterns import PartialConfig, is_admissible
from .subshift import (
    conformist_spec,
    forbidden_patterns,
    horizontal_coord,
    role_model_coords,
    sample_sigma0,
    sigma0,
)
from .words import majority_bit, digit_one_parity, substitution_image, substitution_iterates

MAX_RECORDED_FAILURES = 5


@dataclass
class PropertyReport:
    name: str
    passed: bool
    checked: int
    failures: list[str]
    elapsed_s: float


@dataclass
class VerifyReport:
    group: str
    order: int
    radius: int
    seed: int
    cases: int
    mutated_cell: Optional[str]
    properties: list[PropertyReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_json(self) -> str:
        return json.dumps(
            {
                "group": self.group,
                "order": self.order,
                "radius": self.radius,
                "seed": self.seed,
                "cases": self.cases,
                "mutated_cell": self.mutated_cell,
                "passed": self.passed,
                "properties": [
                    {
                        "name": p.name,
                        "passed": p.passed,
                        "checked": p.checked,
                        "failures": p.failures,
                        "elapsed_s": round(p.elapsed_s, 6),
                    }
                    for p in self.properties
                ],
            },
            indent=2,
        )


class _Collector:
    def __init__(self):
        self.checked = 0
        self.failures: list[str] = []
        self.dropped = 0

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        self.checked += 1
        if not ok:
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(describe())
            else:
                self.dropped += 1

    def done(self) -> tuple[int, list[str]]:
        failures = list(self.failures)
        if self.dropped:
            failures.append(f"... and {self.dropped} more failures")
        return self.checked, failures


def _random_elem(rng: random.Random, table: FiniteGroupTable, span: int = 6) -> Elem:
    positions = rng.sample(range(-span, span + 1), rng.randint(0, 4))
    pairs = [(p, rng.randint(1, table.order - 1)) for p in positions]
    return Elem(table, lamp_from_pairs(table, pairs), rng.randint(-span, span))


def run_verification(
    table: FiniteGroupTable,
    radius: int = 5,
    seed: int = 0,
    cases: int = 10**4,
    mutate: bool = False,
    node_cap: int = 10**6,
) -> VerifyReport:
    """Run every property at the given sizes and return the full report.

    ``mutate`` flips the reference configuration's bit at the identity
    before the admissibility and tail properties run; a healthy suite
    then reports failures (and the CLI exits nonzero), demonstrating the
    checks are not vacuous.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if cases < 1:
        raise ValueError("cases must be positive")
    ell = table.order
    e = identity_elem(table)
    report = VerifyReport(
        group=table.name,
        order=ell,
        radius=radius,
        seed=seed,
        cases=cases,
        mutated_cell=format_element(e) if mutate else None,
    )

    def run(name: str, body: Callable[[_Collector, random.Random], None]) -> None:
        col = _Collector()
        rng = random.Random(f"{seed}:{name}")
        started = time.perf_counter()
        body(col, rng)
        checked, failures = col.done()
        report.properties.append(
            PropertyReport(
                name=name,
                passed=not failures,
                checked=checked,
                failures=failures,
                elapsed_s=time.perf_counter() - started,
            )
        )

    # -- group arithmetic ---------------------------------------------------

    def group_axioms(col, rng):
        for _ in range(cases):
            a, b, c = (_random_elem(rng, table) for _ in range(3))
            col.check(
                multiply(multiply(a, b), c) == multiply(a, multiply(b, c)),
                lambda: f"associativity broke at {format_element(a)}, "
                f"{format_element(b)}, {format_element(c)}",
            )
            col.check(
                multiply(a, inverse(a)) == e and multiply(inverse(a), a) == e,
                lambda: f"inverse broke at {format_element(a)}",
            )
            col.check(
                multiply(a, e) == a and multiply(e, a) == a,
                lambda: f"identity broke at {format_element(a)}",
            )

    run("group-axioms", group_axioms)

    def element_roundtrip(col, rng):
        for _ in range(cases):
            g = _random_elem(rng, table)
            col.check(
                parse_element(table, format_element(g)) == g,
                lambda: f"parse/format mismatch at {format_element(g)}",
            )

    run("element-roundtrip", element_roundtrip)

    def conjugation_shifts_lamps(col, rng):
        for _ in range(max(1, cases // 10)):
            v = rng.randint(1, ell - 1)
            i = rng.randint(-8, 8)
            k = rng.randint(-8, 8)
            conj = multiply(multiply(t_power(table, k), lamp_embed(table, v, i)), t_power(table, -k))
            col.check(
                conj == lamp_embed(table, v, i + k),
                lambda: f"conjugation by t^{k} misplaced a lamp at {i}",
            )

    run("conjugation-shifts-lamps", conjugation_shifts_lamps)

    def voters_share_cosets(col, rng):
        for _ in range(max(1, cases // 10)):
            g = _random_elem(rng, table)
            voters = role_models(g)
            col.check(
                all(h.shift == g.shift - 1 for h in voters),
                lambda: f"voter shift off at {format_element(g)}",
            )
            v = rng.randint(1, ell - 1)
            sibling = multiply(g, lamp_embed(table, v, -1))
            col.check(
                set(role_models(sibling)) == set(voters),
                lambda: f"voter coset not shared between {format_element(g)} "
                f"and {format_element(sibling)}",
            )

    run("voters-share-cosets", voters_share_cosets)

    def voter_coordinates_consecutive(col, rng):
        for _ in range(max(1, cases // 10)):
            g = _random_elem(rng, table)
            base = horizontal_coord(g)
            col.check(
                sorted(role_model_coords(g)) == list(range(ell * base, ell * base + ell)),
                lambda: f"voter coordinates not consecutive at {format_element(g)}",
            )

    run("voter-coordinates-consecutive", voter_coordinates_consecutive)

    # -- digit sequences ----------------------------------------------------

    def digit_parity_recursion(col, rng):
        sweep = min(cases, 10**4)
        for base in (3, 4, 5):
            for n in range(sweep):
                image = substitution_image("01"[digit_one_parity(n, base)], base)
                for j in range(base):
                    col.check(
                        digit_one_parity(n * base + j, base) == int(image[j]),
                        lambda: f"digit recursion broke at base {base}, n={n}, j={j}",
                    )

    run("digit-parity-recursion", digit_parity_recursion)

    def substitution_prefixes(col, rng):
        for base in (3, 4, 5):
            iterates = substitution_iterates(base, 4)
            for small, big in zip(iterates, iterates[1:]):
                col.check(
                    big.startswith(small),
                    lambda: f"iterate not a prefix at base {base}",
                )
                col.check(
                    len(big) == base * len(small),
                    lambda: f"iterate length off at base {base}",
                )

    run("substitution-prefixes", substitution_prefixes)

    def shift_invariance(col, rng):
        t = t_power(table, 1)
        for _ in range(max(1, cases // 10)):
            g = _random_elem(rng, table)
            tg = multiply(t, g)
            col.check(
                horizontal_coord(tg) == horizontal_coord(g),
                lambda: f"horizontal coordinate moved under shift at {format_element(g)}",
            )
            col.check(
                sigma0(tg) == sigma0(g),
                lambda: f"reference bit moved under shift at {format_element(g)}",
            )

    run("shift-invariance", shift_invariance)

    # -- configuration-level properties --------------------------------------

    spec = conformist_spec(table)
    window = ball(table, radius)
    reference = dict(sample_sigma0(window).items())
    if mutate and window:
        reference[e] = 1 - reference[e]
    reference_cfg = PartialConfig(reference)

    def reference_admissible(col, rng):
        ok, violations = is_admissible(reference_cfg, spec)
        col.check(
            ok,
            lambda: f"{len(violations)} violations, first at translate "
            f"{format_element(violations[0].translate)}",
        )
        window_set = set(window)
        for g in window:
            voters = role_models(g)
            if any(h not in window_set for h in voters):
                continue
            maj = majority_bit(reference_cfg.get(h) for h in voters)
            col.check(
                maj is not None and maj == reference_cfg.get(g),
                lambda: f"majority rule fails at {format_element(g)}",
            )

    run("reference-admissible", reference_admissible)

    def tails_ignored(col, rng):
        audit = tail_invariance_audit(reference_cfg, spec, depth=2)
        col.check(audit.passed, lambda: f"{len(audit.failures)} tail mismatches")
        col.checked += audit.checked

    run("tails-ignored", tails_ignored)

    def pattern_census(col, rng):
        patterns = forbidden_patterns(table)
        support = [t_power(table, -1)] + [
            multiply(t_power(table, -1), lamp_embed(table, v, 0)) for v in range(1, ell)
        ]
        forbidden = 0
        for bits in itertools.product((0, 1), repeat=ell + 1):
            center, votes = bits[0], bits[1:]
            if majority_bit(votes) != center:
                forbidden += 1
        col.check(
            len(patterns) == forbidden,
            lambda: f"pattern census mismatch: {len(patterns)} vs {forbidden}",
        )
        col.check(
            all(len(p.cells) == ell + 1 for p in patterns),
            lambda: "pattern support size off",
        )
        col.check(
            all(set(c for c, _ in p.cells) == set(support) | {e} for p in patterns),
            lambda: "pattern support cells off",
        )

    run("pattern-census", pattern_census)

    def majority_logic(col, rng):
        for _ in range(max(1, cases // 10)):
            bits = [rng.randint(0, 1) for _ in range(rng.randint(1, 9))]
            maj = majority_bit(bits)
            flipped = majority_bit(1 - b for b in bits)
            col.check(
                (maj is None and flipped is None) or flipped == 1 - maj,
                lambda: f"majority not symmetric on {bits}",
            )
            ones = sum(bits)
            zeros = len(bits) - ones
            if maj is not None:
                col.check(
                    (maj == 1) == (zeros < ones < len(bits)),
                    lambda: f"majority miscounted {bits}",
                )
            else:
                col.check(
                    ones == zeros or ones == 0 or zeros == 0,
                    lambda: f"majority missing on {bits}",
                )

    run("majority-logic", majority_logic)

    def trivial_subgroup_agreement(col, rng):
        pool = ball(table, min(radius, 3))
        limits = SearchLimits(node_cap=node_cap)
        for _ in range(20):
            cells = rng.sample(pool, rng.randint(1, min(10, len(pool))))
            plain = complete_search(spec, cells, limits=limits)
            quotient = invariant_search(spec, [e], cells, limits=limits)
            col.check(
                (plain.status, plain.nodes, plain.max_depth)
                == (quotient.status, quotient.nodes, quotient.max_depth)
                and (plain.witness is None) == (quotient.witness is None)
                and (
                    plain.witness is None
                    or dict(plain.witness.items()) == dict(quotient.witness.items())
                ),
                lambda: f"trivial-subgroup search diverged on {len(cells)} cells",
            )

    run("trivial-subgroup-agreement", trivial_subgroup_agreement)

    def descriptor_decomposition(col, rng):
        if not table.is_abelian:
            return
        for d in (1, 2):
            sub = make_sum_kernel(table, d)
            for _ in range(max(1, cases // 10)):
                pairs = {}
                for _ in range(rng.randint(0, 5)):
                    pairs[rng.randint(-7, 7)] = rng.randint(1, ell - 1)
                lamp = tuple(sorted(pairs.items()))
                dec = decompose(lamp, sub)
                col.check(
                    lamp_mul(table, dec.mu_L, dec.mu_minus) == lamp
                    and all(pos < 0 for pos, _ in dec.mu_minus)
                    and sub.member_L(dec.mu_L),
                    lambda: f"decomposition broke for {format_element(Elem(table, lamp, 0))} "
                    f"at period {d}",
                )

    run("descriptor-decomposition", descriptor_decomposition)

    return report
