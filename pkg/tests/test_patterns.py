"""Pattern matching, admissibility, and serialization."""

import pytest

from conformist.balls import ball
from conformist.elements import identity_elem, lamp_embed, multiply, t_power
from conformist.groups import cyclic_table
from conformist.patterns import (
    PartialConfig,
    Pattern,
    SftSpec,
    Verdict,
    config_from_json,
    config_to_json,
    is_admissible,
    spec_from_json,
    spec_to_json,
    violates_at,
)
from conformist.subshift import conformist_spec, sample_sigma0


def test_pattern_validation(z3):
    e = identity_elem(z3)
    with pytest.raises(ValueError):
        Pattern([])
    with pytest.raises(ValueError):
        Pattern([(e, 0), (e, 1)])
    with pytest.raises(ValueError):
        Pattern([(e, 2)])
    p = Pattern([(t_power(z3, 1), 1), (e, 0)])
    assert [c.shift for c, _ in p.cells] == [0, 1]  # stored in element order


def test_spec_dedupes_and_requires_order_three(z3):
    e = identity_elem(z3)
    p = Pattern([(e, 0)])
    spec = SftSpec(z3, [p, Pattern([(e, 0)]), Pattern([(e, 1)])])
    assert len(spec.patterns) == 2
    with pytest.raises(ValueError):
        SftSpec(cyclic_table(2), [])


def test_violates_at_tristate(z3):
    e = identity_elem(z3)
    t = t_power(z3, 1)
    p = Pattern([(e, 1), (t, 0)])
    cfg = PartialConfig({e: 1, t: 0})
    assert violates_at(cfg, p, e) is Verdict.VIOLATED
    # translate by t: cells t and t^2; t matches bit 1? cfg[t]=0 != 1 -> satisfied
    assert violates_at(cfg, p, t) is Verdict.SATISFIED
    cfg2 = PartialConfig({e: 1})
    assert violates_at(cfg2, p, e) is Verdict.UNDETERMINED
    cfg3 = PartialConfig({e: 0})
    assert violates_at(cfg3, p, e) is Verdict.SATISFIED


def test_sigma0_is_admissible_on_balls(z3):
    spec = conformist_spec(z3)
    cfg = sample_sigma0(ball(z3, 4))
    ok, violations = is_admissible(cfg, spec)
    assert ok
    assert violations == []


def test_all_zeros_is_inadmissible(z3):
    spec = conformist_spec(z3)
    cfg = PartialConfig({g: 0 for g in ball(z3, 2)})
    ok, violations = is_admissible(cfg, spec)
    assert not ok
    # the identity-translate instance at t has a unanimous role-model row
    assert any(v.translate == t_power(z3, 1) for v in violations)


def test_empty_config_is_admissible(z3):
    ok, violations = is_admissible(PartialConfig({}), conformist_spec(z3))
    assert ok and violations == []


def test_boundary_translates_are_skipped(z3):
    # a unanimous row with its center missing must not be reported
    spec = conformist_spec(z3)
    row = [multiply(t_power(z3, -1), lamp_embed(z3, v, 0)) for v in range(3)]
    cfg = PartialConfig({g: 0 for g in row})
    ok, violations = is_admissible(cfg, spec)
    assert ok and violations == []


def test_partial_config_behaves_like_a_mapping(z3):
    e = identity_elem(z3)
    t = t_power(z3, 1)
    cfg = PartialConfig([(t, 1), (e, 0)])
    assert len(cfg) == 2
    assert list(cfg) == [e, t]  # element order, not insertion order
    assert cfg[e] == 0 and cfg.get(t) == 1
    assert cfg.get(t_power(z3, 2)) is None
    assert e in cfg
    with pytest.raises(ValueError):
        PartialConfig([(e, 0), (e, 1)])
    with pytest.raises(ValueError):
        PartialConfig({e: 2})


def test_config_json_roundtrip(z3):
    cfg = sample_sigma0(ball(z3, 2))
    text = config_to_json(cfg)
    assert config_from_json(z3, text) == cfg


def test_spec_json_roundtrip(z3):
    spec = conformist_spec(z3)
    text = spec_to_json(spec)
    back = spec_from_json(text)
    assert back.table == spec.table
    assert back.patterns == spec.patterns
