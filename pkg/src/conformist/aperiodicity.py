"""Finite-index subgroup descriptors and shift-invariance refutations.

A descriptor names a finite-index subgroup Gamma = <L, t^m> of the lamp
group through a membership oracle for its lamp part L. For any lamp mu,
``decompose`` factors mu = mu_L * mu_minus with mu_L in L and mu_minus
supported on strictly negative positions. Chaining the two facts

* values of an invariant configuration agree across left products by
  subgroup elements, and
* values of an admissible configuration agree across negative-support
  tails,

forces every voter of t to share the value at the identity, and a
unanimous voter set has no strict non-unanimous majority. ``certify``
records that argument as a row-per-lamp-value trace that
``check_certificate`` re-verifies from scratch.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .elements import (
    EMPTY_LAMP,
    Elem,
    Lamp,
    format_element,
    lamp_embed,
    lamp_inv,
    lamp_mul,
    lamp_shift,
    multiply,
    t_power,
)
from .groups import FiniteGroupTable
from .patterns import PartialConfig, SftSpec, is_admissible


class DescriptorError(ValueError):
    """A subgroup descriptor is inconsistent with its declared data."""


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Oracle view of a finite-index subgroup Gamma = <L, t^m>.

    member_L decides membership in the lamp part L; d is the declared
    order of the shift action on the quotient of the lamp sum by L, and
    t_power_in_gamma the smallest shift power inside Gamma. The oracle
    must be pure; d is validated indirectly (a wrong d surfaces as a
    decompose failure, see ``decompose``).
    """

    table: FiniteGroupTable
    member_L: Callable[[Lamp], bool]
    d: int
    t_power_in_gamma: int
    description: str

    def __post_init__(self):
        if self.d < 1:
            raise DescriptorError("descriptor period d must be a positive integer")
        if self.t_power_in_gamma < 1:
            raise DescriptorError("t_power_in_gamma must be a positive integer")
        if not self.member_L(EMPTY_LAMP):
            raise DescriptorError("the identity lamp must belong to the subgroup")


@dataclass(frozen=True)
class LampDecomposition:
    mu_L: Lamp
    mu_minus: Lamp
    k: int


def make_sum_kernel(table: FiniteGroupTable, d: int) -> SubgroupDescriptor:
    """The kernel of per-residue-class coordinate sums, for commutative lamps.

    L holds the lamp words whose coordinates at positions congruent to r
    mod d multiply to the identity, for every residue r. The shift moves
    residue classes cyclically, so shifting by d fixes L and the quotient
    of the lamp sum by L is a d-fold product of the lamp group.
    """
    if d < 1:
        raise DescriptorError("sum-kernel period must be a positive integer")
    if not table.is_abelian:
        raise DescriptorError(
            "the sum-kernel family needs a commutative lamp group; "
            "supply a custom membership oracle instead"
        )

    def member(lamp: Lamp) -> bool:
        sums = [0] * d
        for pos, val in lamp:
            r = pos % d
            sums[r] = table.mult[sums[r]][val]
        return all(s == 0 for s in sums)

    return SubgroupDescriptor(
        table=table,
        member_L=member,
        d=d,
        t_power_in_gamma=d,
        description=f"sum-kernel subgroup, period {d}, lamp order {table.order}",
    )


def decompose(mu: Lamp, sub: SubgroupDescriptor) -> LampDecomposition:
    """Factor mu = mu_L * mu_minus with mu_L in L and mu_minus negative.

    Uses the smallest k >= 0 for which shifting mu down by k*d clears
    position zero and above; mu_minus is that shift, mu_L the quotient.
    The product is re-verified exactly before returning. A membership
    failure for mu_L means the declared d is not actually a period of L.
    """
    table = sub.table
    if mu:
        top = max(pos for pos, _ in mu)
        k = 0 if top < 0 else top // sub.d + 1
    else:
        k = 0
    mu_minus = lamp_shift(mu, -k * sub.d)
    mu_L = lamp_mul(table, mu, lamp_inv(table, mu_minus))
    if lamp_mul(table, mu_L, mu_minus) != mu:
        raise DescriptorError("decomposition product check failed")
    if not sub.member_L(mu_L):
        raise DescriptorError(
            f"lamp quotient {format_element(Elem(table, mu_L, 0))!r} is not in the "
            f"subgroup; the declared period d={sub.d} is inconsistent with the oracle"
        )
    return LampDecomposition(mu_L=mu_L, mu_minus=mu_minus, k=k)


def transfer_generators(table: FiniteGroupTable, d: int, span: int = 8) -> list[Elem]:
    """Window generators for the sum-kernel subgroup of period d.

    Emits the lamp moves [v]_i [v^-1]_(i+d) for positions |i| <= span —
    each transfers one coordinate across distance d, so all per-residue
    sums are preserved — together with the shift t^d. Any subset of the
    subgroup is sound for invariant_search, so span only needs to cover
    the window of interest.
    """
    if d < 1:
        raise DescriptorError("transfer distance must be a positive integer")
    gens = []
    for i in range(-span, span + 1):
        for v in range(1, table.order):
            gens.append(
                multiply(lamp_embed(table, v, i), lamp_embed(table, table.inv[v], i + d))
            )
    gens.append(t_power(table, d))
    return gens


def self_check(
    sub: SubgroupDescriptor, trials: int = 100, rng: Optional[random.Random] = None
) -> list[str]:
    """Spot-check the descriptor's oracle against its declared structure.

    Samples random lamp words, verifying that members found are closed
    under product and inverse and that membership is blind to shifts by
    d. Returns human-readable problem strings; an empty list means every
    sampled case was consistent.
    """
    rng = rng or random.Random(0)
    table = sub.table
    problems = []

    def random_lamp() -> Lamp:
        pairs = {}
        for _ in range(rng.randint(0, 6)):
            pairs[rng.randint(-6, 6)] = rng.randint(1, table.order - 1)
        return tuple(sorted(pairs.items()))

    members = []
    for _ in range(trials):
        lamp = random_lamp()
        inside = sub.member_L(lamp)
        shifted = lamp_shift(lamp, sub.d)
        if sub.member_L(shifted) != inside:
            problems.append(
                f"membership changed under shift by {sub.d}: "
                f"{format_element(Elem(table, lamp, 0))}"
            )
        if inside:
            members.append(lamp)
            if not sub.member_L(lamp_inv(table, lamp)):
                problems.append(
                    f"member with non-member inverse: {format_element(Elem(table, lamp, 0))}"
                )
    for i in range(len(members) - 1):
        product = lamp_mul(table, members[i], members[i + 1])
        if not sub.member_L(product):
            problems.append(
                f"members with non-member product: {format_element(Elem(table, product, 0))}"
            )
    return problems


@dataclass(frozen=True)
class CertificateRow:
    lamp_value: int
    mu_L: Lamp
    mu_minus: Lamp
    k: int
    steps: tuple[str, ...]


@dataclass(frozen=True)
class ContradictionCertificate:
    """Machine-checkable trace refuting subgroup-invariant configurations.

    One row per lamp value v factors the position-zero lamp [v]_0 through
    the subgroup's lamp part and a negative-support tail; together the
    rows force unanimity on the voters of t, which no admissible
    configuration allows. ``check_certificate`` re-verifies every claim.
    """

    descriptor: SubgroupDescriptor
    rows: tuple[CertificateRow, ...]
    conclusion: str


def _fmt(table: FiniteGroupTable, lamp: Lamp) -> str:
    return format_element(Elem(table, lamp, 0))


def certify(sub: SubgroupDescriptor, spec: SftSpec) -> ContradictionCertificate:
    """Build the unanimity contradiction for configurations fixed by Gamma.

    For each lamp value v, decompose [v]_0 = mu_L * mu_minus. For a
    configuration x invariant under Gamma, x([v]_0) = x(mu_minus) because
    mu_L is in Gamma, and x(mu_minus) = x(e) because admissible
    configurations ignore negative-support tails; so every voter of t
    carries x(e), and unanimous voters match a forbidden pattern.
    """
    table = sub.table
    if spec.table != table:
        raise DescriptorError("descriptor and forbidden-pattern spec use different lamp groups")
    rows = []
    for v in range(table.order):
        lamp = EMPTY_LAMP if v == 0 else ((0, v),)
        dec = decompose(lamp, sub)
        steps = (
            f"{_fmt(table, lamp)} = {_fmt(table, dec.mu_L)} * {_fmt(table, dec.mu_minus)} "
            f"with the left factor in the subgroup's lamp part",
            f"invariance: value at {_fmt(table, lamp)} equals value at "
            f"{_fmt(table, dec.mu_minus)}",
            f"negative-support tail: value at {_fmt(table, dec.mu_minus)} equals value at e",
        )
        rows.append(
            CertificateRow(
                lamp_value=v, mu_L=dec.mu_L, mu_minus=dec.mu_minus, k=dec.k, steps=steps
            )
        )
    conclusion = (
        f"every configuration invariant under the subgroup takes a single value on "
        f"all {table.order} voters of t; a unanimous voter set has no strict "
        f"non-unanimous majority, so no admissible configuration is invariant"
    )
    return ContradictionCertificate(descriptor=sub, rows=tuple(rows), conclusion=conclusion)


def check_certificate(cert: ContradictionCertificate, spec: SftSpec) -> list[str]:
    """Independently re-verify every claim a certificate makes.

    Recomputes each row's product and membership from the group table and
    the descriptor oracle, checks tails are negative-support downward
    shifts by multiples of d, checks the rows cover every lamp value
    once, and checks against the forbidden-pattern list that unanimous
    voters are inadmissible whatever the center value. Returns problem
    strings; an empty list means the certificate holds.
    """
    sub = cert.descriptor
    table = sub.table
    problems = []
    if spec.table != table:
        problems.append("certificate and spec use different lamp groups")
        return problems

    seen = [row.lamp_value for row in cert.rows]
    if sorted(seen) != list(range(table.order)):
        problems.append(f"rows cover lamp values {sorted(seen)}, expected 0..{table.order - 1}")

    for row in cert.rows:
        v = row.lamp_value
        lamp = EMPTY_LAMP if v == 0 else ((0, v),)
        label = f"row for lamp value {v}"
        if lamp_mul(table, row.mu_L, row.mu_minus) != lamp:
            problems.append(f"{label}: recorded factors do not multiply back")
        if not sub.member_L(row.mu_L):
            problems.append(f"{label}: left factor fails the membership oracle")
        if any(pos >= 0 for pos, _ in row.mu_minus):
            problems.append(f"{label}: tail has nonnegative support")
        if row.k < 0 or row.mu_minus != lamp_shift(lamp, -row.k * sub.d):
            problems.append(f"{label}: tail is not the recorded downward shift by k*d")

    voters = [lamp_embed(table, v, 0) for v in range(table.order)]
    center = t_power(table, 1)
    for bit in (0, 1):
        for center_bit in (0, 1):
            cfg = PartialConfig([(center, center_bit)] + [(g, bit) for g in voters])
            ok, _ = is_admissible(cfg, spec)
            if ok:
                problems.append(
                    f"unanimous voters with bit {bit} and center {center_bit} "
                    f"are not excluded by the forbidden patterns"
                )
    return problems


def certificate_to_json(cert: ContradictionCertificate, problems: Optional[list[str]] = None) -> str:
    table = cert.descriptor.table
    payload = {
        "descriptor": cert.descriptor.description,
        "d": cert.descriptor.d,
        "t_power_in_gamma": cert.descriptor.t_power_in_gamma,
        "lamp_order": table.order,
        "rows": [
            {
                "lamp_value": row.lamp_value,
                "mu_L": _fmt(table, row.mu_L),
                "mu_minus": _fmt(table, row.mu_minus),
                "k": row.k,
                "steps": list(row.steps),
            }
            for row in cert.rows
        ],
        "conclusion": cert.conclusion,
    }
    if problems is not None:
        payload["validated"] = not problems
        payload["problems"] = problems
    return json.dumps(payload, indent=2)
