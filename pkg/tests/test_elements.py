"""Lamplighter arithmetic, checked against an independent wreath-product oracle."""

import random

import pytest

from conformist.elements import (
    Elem,
    ElementSyntaxError,
    elem_key,
    format_element,
    identity_elem,
    inverse,
    lamp_embed,
    lamp_from_pairs,
    multiply,
    parse_element,
    role_models,
    t_power,
)
from conformist.groups import cyclic_table

from conftest import random_elem


def test_conjugation_moves_lamps_up(z3):
    # t * [v]_i * t^-1 = [v]_{i+1}
    t = t_power(z3, 1)
    for v in (1, 2):
        for i in (-3, 0, 2):
            lhs = multiply(multiply(t, lamp_embed(z3, v, i)), inverse(t))
            assert lhs == lamp_embed(z3, v, i + 1)


def test_semidirect_product_example(z3):
    # ([1]_0 t^2) ([2]_0 t^-1) = [1]_0 [2]_2 t^1
    a = Elem(z3, ((0, 1),), 2)
    b = Elem(z3, ((0, 2),), -1)
    assert multiply(a, b) == Elem(z3, ((0, 1), (2, 2)), 1)


def test_lamp_values_merge_through_the_table(z3):
    # colliding positions multiply in the lamp group; 1 + 2 = 0 in Z/3
    a = lamp_embed(z3, 1, 5)
    b = lamp_embed(z3, 2, 5)
    assert multiply(a, b).is_identity
    c = multiply(lamp_embed(z3, 1, 5), lamp_embed(z3, 1, 5))
    assert c == lamp_embed(z3, 2, 5)


def test_identity_and_inverses(z3):
    e = identity_elem(z3)
    assert e.is_identity
    assert inverse(e) == e
    g = Elem(z3, ((-2, 1), (0, 2)), 3)
    assert multiply(g, identity_elem(z3)) == g
    assert multiply(identity_elem(z3), g) == g
    assert multiply(g, inverse(g)).is_identity
    assert multiply(inverse(g), g).is_identity
    assert inverse(t_power(z3, 4)) == t_power(z3, -4)
    # (mu t^k)^-1 carries the inverted lamp down by k
    assert inverse(Elem(z3, ((2, 1),), 2)) == Elem(z3, ((0, 2),), -2)


def _wreath_project(g: Elem, m: int):
    """Project to the finite wreath product over Z/m: positions and shift mod m."""
    vals = [0] * m
    for pos, val in g.lamp:
        vals[pos % m] = g.table.mul(vals[pos % m], val)
    return tuple(vals), g.shift % m


def _wreath_mul(table, a, b, m: int):
    """Independent multiplication in the finite wreath product."""
    avals, ak = a
    bvals, bk = b
    vals = tuple(table.mul(avals[p], bvals[(p - ak) % m]) for p in range(m))
    return vals, (ak + bk) % m


def test_multiplication_against_wreath_oracle(z3):
    rng = random.Random(20260819)
    m = 7
    for _ in range(500):
        a = random_elem(rng, z3)
        b = random_elem(rng, z3)
        got = _wreath_project(multiply(a, b), m)
        want = _wreath_mul(z3, _wreath_project(a, m), _wreath_project(b, m), m)
        assert got == want


def test_group_axioms_random(z3):
    rng = random.Random(7)
    e = identity_elem(z3)
    for _ in range(300):
        a, b, c = (random_elem(rng, z3) for _ in range(3))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
        assert multiply(a, inverse(a)) == e
        assert multiply(inverse(a), a) == e


def test_role_models_of_shift(z3):
    # RM(t) = t t^-1 [v]_0 = the lamps at position 0
    got = role_models(t_power(z3, 1))
    assert got == [identity_elem(z3), lamp_embed(z3, 1, 0), lamp_embed(z3, 2, 0)]


def test_role_models_of_identity(z3):
    got = role_models(identity_elem(z3))
    assert got == [
        Elem(z3, (), -1),
        Elem(z3, ((-1, 1),), -1),
        Elem(z3, ((-1, 2),), -1),
    ]


def test_role_models_are_the_stated_coset(z3):
    rng = random.Random(99)
    for _ in range(200):
        g = random_elem(rng, z3)
        got = role_models(g)
        assert len(got) == 3
        want = {multiply(g, multiply(t_power(z3, -1), lamp_embed(z3, v, 0))) for v in range(3)}
        assert set(got) == want
        assert all(h.shift == g.shift - 1 for h in got)


def test_role_model_coset_is_shared(z3):
    # elements differing by a lamp one level down share their role models
    rng = random.Random(5)
    for _ in range(100):
        g = random_elem(rng, z3)
        h = multiply(g, lamp_embed(z3, rng.randint(1, 2), -1))
        assert sorted(role_models(g), key=elem_key) == sorted(role_models(h), key=elem_key)


def test_format_examples(z3):
    assert format_element(identity_elem(z3)) == "e"
    assert format_element(t_power(z3, -2)) == "t^-2"
    assert format_element(Elem(z3, ((-1, 2),), 3)) == "a2@-1 * t^3"
    assert format_element(Elem(z3, ((-1, 1), (4, 2)), 0)) == "a1@-1 * a2@4"


def test_parse_examples(z3):
    assert parse_element(z3, "e") == identity_elem(z3)
    assert parse_element(z3, "t") == t_power(z3, 1)
    assert parse_element(z3, "t^-3") == t_power(z3, -3)
    assert parse_element(z3, "a2@-1 * t^3") == Elem(z3, ((-1, 2),), 3)
    # tokens multiply left to right: t then a1@0 puts the lamp at position 1
    assert parse_element(z3, "t * a1@0") == Elem(z3, ((1, 1),), 1)
    assert parse_element(z3, "a0@5") == identity_elem(z3)
    assert parse_element(z3, "t^2 * t^-2") == identity_elem(z3)


def test_parse_rejects_garbage(z3):
    for bad in ("", "  ", "a3@0", "a1@", "q", "t^", "a1@0 **t", "t^1.5", "a-1@0"):
        with pytest.raises(ElementSyntaxError):
            parse_element(z3, bad)


def test_parse_print_roundtrip_random(z3):
    rng = random.Random(20260819)
    for _ in range(500):
        g = random_elem(rng, z3)
        assert parse_element(z3, format_element(g)) == g


def test_total_order_is_lexicographic(z3):
    a = t_power(z3, -1)
    b = identity_elem(z3)
    c = lamp_embed(z3, 1, 0)
    d = lamp_embed(z3, 1, 1)
    e = t_power(z3, 1)
    assert sorted([e, d, c, b, a], key=elem_key) == [a, b, c, d, e]
    assert a < b < c < d < e


def test_lamp_from_pairs_validates(z3):
    assert lamp_from_pairs(z3, [(3, 0), (1, 2)]) == ((1, 2),)
    with pytest.raises(ValueError):
        lamp_from_pairs(z3, [(0, 1), (0, 2)])
    with pytest.raises(ValueError):
        lamp_from_pairs(z3, [(0, 3)])


def test_mixed_tables_refuse_to_multiply(z3, z4):
    with pytest.raises(ValueError):
        multiply(identity_elem(z3), identity_elem(z4))
