"""S-table, Gauss factorization, tau, families, coordinates, phi_k, center."""

import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ty3.exact import ScalarPoly
from ty3.pbw import Element
from ty3.series import WindowError, substitute_linear
from ty3.twisted import (
    DRINFELD,
    DRINFELD_F,
    I3,
    MNO_S,
    PM,
    Formal,
    NotInSpan,
    T,
    T_series,
    Y3,
    admissible,
    build_s_table,
    center_series,
    expand_family_monomials,
    family_generators,
    gauss_reassemble,
    monomials_of_weight,
    phi_k_image,
    reexpand,
    shifted,
    shifted_generating_set,
    solve_coordinates,
    tau,
)

Y = Y3()

# S_{-1,1}^(2), worked out by hand from S = eta(T) T at level 2
S_M11_2 = "1*T[-1,1;1] + 2*T[-1,1;2] + -2*T[-1,1;1]*T[1,1;1] + -1*T[0,1;1]*T[0,1;1]"
# G^(2) from the series route below, frozen
G_2 = ("1*T[-1,-1;1] + -1*T[1,1;1] + 2*T[0,0;2] + -2*T[-1,0;1]*T[0,-1;1] + 2*T[0,-1;1]*T[0,1;1]"
       " + -1*T[0,0;1]*T[0,0;1] + -2*T[0,1;1]*T[1,0;1]")


def series_route_s(N):
    """S_ij(u) = sum_k T_{-k,-i}(-u) T_{k,j}(u) by series multiplication."""
    out = {}
    for i, j in product(I3, repeat=2):
        acc = None
        for k in I3:
            t = substitute_linear(T_series(-k, -i, N), -1) * T_series(k, j, N)
            acc = t if acc is None else acc + t
        out[i, j] = acc
    return out


def test_s_table_against_series_route():
    s = build_s_table(4)
    oracle = series_route_s(4)
    for (i, j), ser in oracle.items():
        for r in range(5):
            assert s[i, j, r] == ser[r], (i, j, r)


def test_s_low_levels():
    s = build_s_table(2)
    for i, j in product(I3, repeat=2):
        assert s[i, j, 0] == (1 if i == j else 0)
        assert s[i, j, 1] == T(i, j, 1) - T(-j, -i, 1)
    assert s[-1, 1, 2].to_text() == S_M11_2
    with pytest.raises(WindowError):
        s[0, 0, 3]


def test_gauss_low_levels(t4):
    for i in PM:
        assert t4.E[i, 1] == t4.S[i, 0, 1]
        assert t4.F[i, 1] == t4.S[0, i, 1]
        for j in PM:
            for r in range(5):
                assert t4.D[i, j, r] == t4.S[i, j, r]
    assert not t4.G[1]
    assert t4.G[2].to_text() == G_2


def test_inverse_tables(t4):
    one = Element.one(Y)
    g, gt = t4.series("G"), t4.series("Gt")
    assert (g * gt)[0] == one and all(not (g * gt)[r] for r in range(1, 5))
    for i, j in product(PM, repeat=2):
        acc = sum((t4.series("D", i, k) * t4.series("Dt", k, j) for k in PM[1:]),
                  t4.series("D", i, PM[0]) * t4.series("Dt", PM[0], j))
        assert acc[0] == (1 if i == j else 0)
        assert all(not acc[r] for r in range(1, 5))


def test_reassembly(t6):
    back = gauss_reassemble(t6)
    for (i, j), ser in back.items():
        assert ser == t6.S.series(i, j)


def test_truncated_tables_agree(t6):
    small = t6.truncate(3)
    assert small.N == 3
    assert small.G[3] == t6.G[3]
    with pytest.raises(WindowError):
        small.lookup(("E", 1, 4))


# -- tau ---------------------------------------------------------------------

s_symbols = st.tuples(st.just("S"), st.sampled_from(I3), st.sampled_from(I3), st.integers(1, 2))
s_words = st.lists(s_symbols, min_size=1, max_size=3)


@given(s_words, s_words)
def test_tau_is_an_antiinvolution(u, v):
    a, b = Formal.word(*u), Formal.word(*v)
    assert tau(tau(a)) == a
    assert tau(a * b) == tau(b) * tau(a)


@given(seed=st.integers(0, 10**6))
def test_tau_respects_relations(t4, seed):
    # write [a, b] in ordered S-monomials, apply tau to both sides
    rng = random.Random(seed)
    a = ("S",) + tuple(rng.choice(I3) for _ in range(2)) + (rng.randint(1, 2),)
    b = ("S",) + tuple(rng.choice(I3) for _ in range(2)) + (rng.randint(1, 2),)
    look = t4.lookup
    bracket = look(a) * look(b) - look(b) * look(a)
    coords = solve_coordinates(bracket, MNO_S, a[-1] + b[-1], t4)
    assert coords is not NotInSpan
    expansion = Formal()
    for mono, poly in coords.items():
        expansion = expansion + Formal.word(*mono, coef=poly[0])
    lhs = tau(Formal.sym(*a) * Formal.sym(*b) - Formal.sym(*b) * Formal.sym(*a))
    assert lhs.evaluate(look, Y) == tau(expansion).evaluate(look, Y)


def test_tau_rejects_drinfeld_symbols():
    with pytest.raises(ValueError):
        tau(Formal.sym("E", 1, 1))


# -- families ----------------------------------------------------------------


def test_admissibility():
    assert admissible(-1, 0, 1) and admissible(-1, -1, 1)
    assert not admissible(-1, 1, 1) and not admissible(1, -1, 1)
    assert admissible(-1, 1, 2) and admissible(0, 0, 2)
    assert not admissible(1, 0, 2)
    for r in (1, 2, 3, 4):
        count = sum(admissible(i, j, r) for i, j in product(I3, repeat=2))
        assert count == (3 if r % 2 else 6)
    with pytest.raises(ValueError):
        admissible(0, 0, 0)


@pytest.mark.parametrize("fam", [MNO_S, DRINFELD, DRINFELD_F])
def test_monomial_counts(fam):
    assert [len(monomials_of_weight(fam, w)) for w in (1, 2, 3)] == [3, 12, 31]


def test_family_generators():
    assert family_generators(DRINFELD, 1) == [("D", -1, -1, 1), ("E", -1, 1), ("E", 1, 1)]
    assert ("G", 2) in family_generators(DRINFELD_F, 2)
    assert [g for g in family_generators(shifted(2), 3) if g[0] == "E"] == [("E", -1, 3), ("E", 1, 3)]
    gens = shifted_generating_set(1, 2)
    assert ("G", 1) in gens and ("D", 1, 1, 1) in gens and ("E", 1, 1) not in gens


def test_expand_needs_tables(t4):
    with pytest.raises(WindowError):
        expand_family_monomials(DRINFELD, 5, t4)
    pairs = expand_family_monomials(DRINFELD, 2, t4, exact_weight=True)
    assert len(pairs) == 12


# -- coordinates ---------------------------------------------------------------


def test_f_in_terms_of_e(t4):
    coords = solve_coordinates(t4.F[1, 1], DRINFELD, 1, t4)
    assert coords == {(("E", -1, 1),): ScalarPoly(-1)}


def test_not_in_span(t4):
    assert solve_coordinates(T(-1, 0, 1), MNO_S, 1, t4) is NotInSpan
    assert solve_coordinates(t4.E[1, 1], shifted(1), 3, t4) is NotInSpan
    assert not NotInSpan


def test_coordinates_round_trip(t4):
    target = t4.S[1, 1, 2] * t4.S[0, 0, 2] + Element.x(Y) * t4.G[3]
    for fam in (MNO_S, DRINFELD, DRINFELD_F):
        coords = solve_coordinates(target, fam, 4, t4)
        assert coords is not NotInSpan
        assert reexpand(coords, t4) == target


def test_weight_cap(t4):
    assert solve_coordinates(t4.G[4], DRINFELD, 3, t4) is NotInSpan


# -- phi_k -------------------------------------------------------------------


def test_phi_of_low_g(t4):
    x = Element.x(Y)
    assert phi_k_image(("G", 2), 1, t4) == t4.G[2] + x.scale(2) - x * x
    assert phi_k_image(("G", 1), 1, t4) == t4.G[1]


def test_phi_of_e_and_d(t4):
    x = Element.x(Y)
    assert phi_k_image(("E", 1, 2), 1, t4) == t4.E[1, 2] + x * t4.E[1, 1]
    assert phi_k_image(("D", -1, 1, 2), 2, t4) == t4.D[-1, 1, 2]
    with pytest.raises(ValueError):
        phi_k_image(("E", 1, 1), 1, t4)
    with pytest.raises(ValueError):
        phi_k_image(("F", 1, 3), 1, t4)


# -- center --------------------------------------------------------------------


def test_center_low_levels(t4):
    C = center_series(t4)
    assert C[0] == 1
    for r in range(1, 5):
        assert C[r].weight() <= r
        for i, j in product(I3, repeat=2):
            x = t4.S[i, j, 1]
            assert C[r] * x == x * C[r]
