"""Exhaustive-search engine: outcomes, determinism, and audits."""

import itertools
import json
import random

import pytest

from conformist._kernels import available_kernels
from conformist.aperiodicity import transfer_generators
from conformist.balls import ball
from conformist.elements import format_element, identity_elem, multiply, t_power
from conformist.engine import (
    AuditReport,
    SearchLimits,
    complete_search,
    invariant_search,
    outcome_to_json,
    tail_invariance_audit,
)
from conformist.patterns import PartialConfig, SftSpec, is_admissible
from conformist.subshift import conformist_spec, sample_sigma0, sigma0

WORKER_COUNTS = (1, 2, 3, 5)

# Node counts pinned from the first verified runs; the searches are
# deterministic, so any drift here means the engine changed behavior.
TRANSFER_UNSAT = {1: (2, 6), 2: (3, 190)}  # shift distance -> (radius, nodes)


def _as_dict(cfg):
    return dict(cfg.items())


# ---------------------------------------------------------------------------
# complete_search outcomes


def test_hinted_search_on_ball_recovers_reference_configuration(z3):
    spec = conformist_spec(z3)
    for radius in (1, 2, 3):
        domain = ball(z3, radius)
        outcome = complete_search(spec, domain, hint=sigma0)
        assert outcome.status == "SAT"
        assert _as_dict(outcome.witness) == _as_dict(sample_sigma0(domain))
        ok, violations = is_admissible(outcome.witness, spec)
        assert ok and not violations
        assert 0 < outcome.nodes <= len(domain)
        assert outcome.max_depth <= outcome.nodes


def test_hint_styles_agree(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 2)
    reference = sample_sigma0(domain)
    as_callable = complete_search(spec, domain, hint=sigma0)
    as_config = complete_search(spec, domain, hint=reference)
    as_mapping = complete_search(spec, domain, hint=dict(reference.items()))
    assert (
        _as_dict(as_callable.witness)
        == _as_dict(as_config.witness)
        == _as_dict(as_mapping.witness)
    )
    with pytest.raises(TypeError, match="hint"):
        complete_search(spec, domain, hint=42)


def test_wrong_hint_still_finds_a_witness(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 2)
    outcome = complete_search(spec, domain, hint=lambda g: 1 - sigma0(g))
    assert outcome.status == "SAT"
    ok, _ = is_admissible(outcome.witness, spec)
    assert ok


def test_empty_domain_is_trivially_satisfiable(z3):
    outcome = complete_search(conformist_spec(z3), [])
    assert outcome.status == "SAT"
    assert outcome.nodes == 0
    assert outcome.max_depth == 0
    assert _as_dict(outcome.witness) == {}


def test_full_shift_takes_one_decision_per_cell(z3):
    spec = SftSpec(z3, [])
    domain = ball(z3, 2)
    outcome = complete_search(spec, domain)
    assert outcome.status == "SAT"
    assert outcome.nodes == len(domain)
    assert outcome.max_depth == len(domain)
    assert set(_as_dict(outcome.witness).values()) == {0}


def test_seeding_a_forbidden_pattern_fails_in_propagation(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 2)
    seed = PartialConfig(spec.patterns[0].cells)
    outcome = complete_search(spec, domain, seed=seed)
    assert outcome.status == "UNSAT"
    assert outcome.nodes == 0
    assert outcome.witness is None


def test_satisfiable_seed_is_honored(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 2)
    e = identity_elem(z3)
    seed = PartialConfig([(e, sigma0(e))])
    outcome = complete_search(spec, domain, seed=seed, hint=sigma0)
    assert outcome.status == "SAT"
    assert outcome.witness.get(e) == sigma0(e)


def test_seed_outside_domain_is_rejected(z3):
    spec = conformist_spec(z3)
    seed = PartialConfig([(t_power(z3, 5), 0)])
    with pytest.raises(ValueError, match="outside the domain"):
        complete_search(spec, ball(z3, 1), seed=seed)


def test_node_cap_reports_resource_limit(z3):
    spec = conformist_spec(z3)
    outcome = complete_search(spec, ball(z3, 3), limits=SearchLimits(node_cap=50))
    assert outcome.status == "RESOURCE_LIMIT"
    assert outcome.nodes == 50
    assert outcome.witness is None


def test_limits_validation():
    with pytest.raises(ValueError, match="node_cap"):
        SearchLimits(node_cap=-1)
    with pytest.raises(ValueError, match="workers"):
        SearchLimits(workers=0)


# ---------------------------------------------------------------------------
# completeness against brute force


def _brute_force_admissible(spec, cells, seed):
    for bits in itertools.product((0, 1), repeat=len(cells)):
        cfg = PartialConfig(zip(cells, bits))
        if seed is not None and any(cfg.get(c) != b for c, b in seed.items()):
            continue
        ok, _ = is_admissible(cfg, spec)
        if ok:
            return True
    return False


def test_matches_brute_force_on_random_small_domains(z3):
    spec = conformist_spec(z3)
    pool = ball(z3, 3)
    rng = random.Random(20240907)
    for trial in range(25):
        cells = rng.sample(pool, rng.randint(1, 10))
        seed = None
        if trial % 3 == 0:
            picked = rng.sample(cells, min(len(cells), rng.randint(1, 3)))
            seed = PartialConfig((c, rng.randint(0, 1)) for c in picked)
        expected = _brute_force_admissible(spec, cells, seed)
        outcome = complete_search(spec, cells, seed=seed)
        assert outcome.status == ("SAT" if expected else "UNSAT"), f"trial {trial}"
        if expected:
            ok, _ = is_admissible(outcome.witness, spec)
            assert ok
            if seed is not None:
                assert all(outcome.witness.get(c) == b for c, b in seed.items())


# ---------------------------------------------------------------------------
# determinism across kernels and worker counts


def _instance_runs(z3, kernel, workers):
    spec = conformist_spec(z3)
    sat = complete_search(
        spec,
        ball(z3, 2),
        hint=sigma0,
        limits=SearchLimits(node_cap=10**6, workers=workers, kernel=kernel),
    )
    unsat = invariant_search(
        spec,
        transfer_generators(z3, 2),
        ball(z3, 3),
        limits=SearchLimits(node_cap=10**6, workers=workers, kernel=kernel),
    )
    capped = complete_search(
        spec,
        ball(z3, 3),
        limits=SearchLimits(node_cap=20000, workers=workers, kernel=kernel),
    )
    return sat, unsat, capped


def _stats(outcome):
    witness = None
    if outcome.witness is not None:
        witness = tuple((format_element(g), b) for g, b in outcome.witness.items())
    return (outcome.status, outcome.nodes, outcome.max_depth, witness)


def test_outcomes_do_not_depend_on_kernel_or_worker_count(z3):
    rows = {}
    for kernel in available_kernels():
        for workers in WORKER_COUNTS:
            for name, outcome in zip(
                ("sat", "unsat", "capped"), _instance_runs(z3, kernel, workers)
            ):
                rows.setdefault(name, []).append(_stats(outcome))
    for name, seen in rows.items():
        assert all(row == seen[0] for row in seen), f"{name}: {seen}"
    assert rows["sat"][0][0] == "SAT"
    assert rows["unsat"][0][0] == "UNSAT"
    assert rows["capped"][0][:3] == ("RESOURCE_LIMIT", 20000, 35)


def test_outcome_records_kernel_and_workers(z3):
    spec = conformist_spec(z3)
    outcome = complete_search(
        spec, ball(z3, 1), hint=sigma0, limits=SearchLimits(workers=3, kernel="python")
    )
    assert outcome.kernel == "python"
    assert outcome.workers == 3


# ---------------------------------------------------------------------------
# invariant search


def test_identity_generator_changes_nothing(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 2)
    plain = complete_search(spec, domain, hint=sigma0)
    quotient = invariant_search(spec, [identity_elem(z3)], domain, hint=sigma0)
    assert _stats(plain) == _stats(quotient)


def test_shift_invariant_configuration_exists(z3):
    spec = conformist_spec(z3)
    domain = ball(z3, 3)
    outcome = invariant_search(spec, [t_power(z3, 1)], domain, hint=sigma0)
    assert outcome.status == "SAT"
    witness = outcome.witness
    for g in domain:
        tg = multiply(t_power(z3, 1), g)
        if witness.get(tg) is not None:
            assert witness.get(tg) == witness.get(g)


def test_invariant_search_matches_brute_force_on_small_ball(z3):
    spec = conformist_spec(z3)
    cells = ball(z3, 1)
    gens = transfer_generators(z3, 1, span=1)
    outcome = invariant_search(spec, gens, cells)

    def invariant_and_admissible(cfg):
        ok, _ = is_admissible(cfg, spec)
        if not ok:
            return False
        cellset = set(cells)
        for g in gens:
            for x in cells:
                gx = multiply(g, x)
                if gx in cellset and cfg.get(gx) != cfg.get(x):
                    return False
        return True

    expected = any(
        invariant_and_admissible(PartialConfig(zip(cells, bits)))
        for bits in itertools.product((0, 1), repeat=len(cells))
    )
    assert outcome.status == ("SAT" if expected else "UNSAT")


@pytest.mark.parametrize("distance", sorted(TRANSFER_UNSAT))
def test_transfer_generators_force_unsat_at_known_radius(z3, distance):
    spec = conformist_spec(z3)
    radius, nodes = TRANSFER_UNSAT[distance]
    below = invariant_search(spec, transfer_generators(z3, distance), ball(z3, radius - 1))
    assert below.status == "SAT"
    at = invariant_search(spec, transfer_generators(z3, distance), ball(z3, radius))
    assert at.status == "UNSAT"
    assert at.nodes == nodes


def test_invariant_search_validates_generators(z3, z4):
    spec = conformist_spec(z3)
    with pytest.raises(ValueError, match="at least one"):
        invariant_search(spec, [], ball(z3, 1))
    with pytest.raises(ValueError, match="different lamp group"):
        invariant_search(spec, [t_power(z4, 1)], ball(z3, 1))


# ---------------------------------------------------------------------------
# tail-invariance audit


def test_reference_configuration_passes_tail_audit(z3):
    spec = conformist_spec(z3)
    cfg = sample_sigma0(ball(z3, 4))
    report = tail_invariance_audit(cfg, spec, depth=2)
    assert isinstance(report, AuditReport)
    assert report.passed
    assert report.checked > 0
    assert report.depth == 2


def test_corrupted_configuration_fails_tail_audit(z3):
    spec = conformist_spec(z3)
    cfg = dict(sample_sigma0(ball(z3, 4)).items())
    e = identity_elem(z3)
    cfg[e] = 1 - cfg[e]
    report = tail_invariance_audit(PartialConfig(cfg), spec, depth=2)
    assert not report.passed
    assert any(f.g == e or f.tail == e for f in report.failures) or report.failures


def test_tail_audit_depth_zero_checks_nothing(z3):
    spec = conformist_spec(z3)
    report = tail_invariance_audit(sample_sigma0(ball(z3, 2)), spec, depth=0)
    assert report.passed
    assert report.checked == 0
    with pytest.raises(ValueError, match="nonnegative"):
        tail_invariance_audit(sample_sigma0(ball(z3, 2)), spec, depth=-1)


# ---------------------------------------------------------------------------
# serialization


def test_outcome_json_shape(z3):
    spec = conformist_spec(z3)
    outcome = complete_search(spec, ball(z3, 1), hint=sigma0)
    payload = json.loads(outcome_to_json(outcome))
    assert payload["status"] == "SAT"
    assert payload["nodes"] == outcome.nodes
    assert payload["max_depth"] == outcome.max_depth
    assert payload["kernel"] == outcome.kernel
    assert payload["workers"] == 1
    assert isinstance(payload["wall_time_s"], float)
    cells = {row["elem"]: row["bit"] for row in payload["witness"]}
    assert cells == {format_element(g): b for g, b in outcome.witness.items()}

    capped = complete_search(spec, ball(z3, 3), limits=SearchLimits(node_cap=10))
    assert json.loads(outcome_to_json(capped))["witness"] is None
