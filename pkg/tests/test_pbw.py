"""Straightening kernel: normal forms in Y_3 and in U(so_3)."""

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ty3.pbw import (
    XGEN,
    Element,
    index_set,
    lie_spec,
    normal_form,
    random_element,
    rtt_straighten_rule,
    so3_spec,
    so3_structure_constants,
)

Y = rtt_straighten_rule(3)
I3 = (-1, 0, 1)
seeds = st.integers(0, 10**6)


def T(i, j, r):
    return Element.gen(Y, Y.T(i, j, r))


def raw_word(rng, W, length):
    gens = Y.generators(W)
    return [rng.choice(gens) for _ in range(length)]


def test_index_sets():
    assert index_set(3) == [-1, 0, 1]
    assert index_set(4) == [-2, -1, 1, 2]


@pytest.mark.parametrize("s", [1, 2, 3])
def test_level_one_brackets(s):
    # [T_ij^(1), T_kl^(s)] = delta_kj T_il^(s) - delta_il T_kj^(s)
    for i, j, k, l in product(I3, repeat=4):
        lhs = T(i, j, 1) * T(k, l, s) - T(k, l, s) * T(i, j, 1)
        rhs = Element.zero(Y)
        if k == j:
            rhs = rhs + T(i, l, s)
        if i == l:
            rhs = rhs - T(k, j, s)
        assert lhs == rhs, (i, j, k, l, s)


@given(seeds)
def test_rewriting_order_is_irrelevant(seed):
    rng = random.Random(seed)
    raw = [(rng.randint(-3, 3), raw_word(rng, 3, rng.randint(2, 4))) for _ in range(3)]
    left = normal_form(raw, Y, "leftmost")
    right = normal_form(raw, Y, "rightmost")
    assert left == right


@given(seeds)
def test_product_matches_rewriting(seed):
    rng = random.Random(seed)
    u, v = raw_word(rng, 3, 2), raw_word(rng, 3, 2)
    a, b = normal_form([(1, u)], Y), normal_form([(1, v)], Y)
    assert a * b == normal_form([(1, u + v)], Y, "rightmost")


@given(seeds)
def test_associativity(seed):
    rng = random.Random(seed)
    a, b, c = (random_element(Y, rng, 3) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(seeds)
def test_jacobi(seed):
    rng = random.Random(seed)
    a, b, c = (Element.gen(Y, g) for g in (rng.choice(Y.generators(3)) for _ in range(3)))

    def br(x, y):
        return x * y - y * x

    assert not (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b)))


@given(seeds)
def test_text_round_trip(seed):
    rng = random.Random(seed)
    e = random_element(Y, rng, 4) * Element.x(Y, rng.randint(0, 2))
    assert Element.from_text(Y, e.to_text()) == e


def test_x_is_central():
    x = Element.x(Y)
    t = T(-1, 1, 2)
    assert x * t == t * x
    assert (x * t).coefficients()[(Y.T(-1, 1, 2),)].degree() == 1
    assert (x * x).terms == {(XGEN, XGEN): 1}


def test_text_rejects_unordered_monomials():
    with pytest.raises(ValueError):
        Element.from_text(Y, "1*T[1,1;2]*T[-1,-1;1]")


def test_weights():
    e = T(0, 0, 2) * T(1, -1, 3)
    assert e.weight() == 5
    parts = [e.weight_part(w) for w in range(6)]
    assert sum(parts[1:], parts[0]) == e
    assert all(not p or p.weight() == w for w, p in enumerate(parts))


def test_so3_constants_by_hand():
    # basis f[-1,-1], f[-1,0], f[0,-1]
    expected = {(0, 1): {1: 1}, (1, 0): {1: -1}, (0, 2): {2: -1}, (2, 0): {2: 1},
                (1, 2): {0: 1}, (2, 1): {0: -1}}
    assert so3_structure_constants() == expected


def test_so3_enveloping_algebra():
    U = so3_spec()
    h, e, f = (Element.gen(U, g) for g in range(3))
    assert e * f - f * e == h
    assert f * e == e * f - h
    casimir = h * h + e * f + f * e
    for g in (h, e, f):
        assert casimir * g == g * casimir


def test_lie_spec_rejects_non_jacobi():
    bad = {(0, 1): {2: 1}, (1, 0): {2: -1}, (1, 2): {0: 1}, (2, 1): {0: -1},
           (0, 2): {0: 1}, (2, 0): {0: -1}}
    with pytest.raises(ValueError):
        lie_spec("bad", ["a", "b", "c"], bad)
