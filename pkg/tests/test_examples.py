"""Small worked examples, each checked directly."""

import json
from fractions import Fraction
from itertools import product

import pytest

from ty3 import verify as V
from ty3.cache import cache_tables, load_tables, table_entries
from ty3.cli import main
from ty3.exact import ScalarPoly, poly_arith, rational_arith, signed_binomial_weight
from ty3.pbw import Element, gl1_spec, normal_form, rtt_straighten_rule
from ty3.relations import eq_ss_relation, realize, series_relations
from ty3.series import ElementSeries, SeriesMatrix, cleared_identity_check, series_inverse, substitute_linear
from ty3.twisted import (
    DRINFELD,
    I3,
    MNO_S,
    PM,
    Y3,
    admissible,
    build_s_table,
    monomials_of_weight,
    phi_k_image,
    solve_coordinates,
)

Y = rtt_straighten_rule(3)
x = ScalarPoly.x()


def T(i, j, r):
    return Element.gen(Y, Y.T(i, j, r))


# -- scalars -------------------------------------------------------------------


def test_scalar_examples():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert poly_arith(x, ScalarPoly(1), "mul") == x
    assert poly_arith(x, x, "mul") == ScalarPoly({2: 1})
    assert poly_arith(ScalarPoly([0, 2, -1]), ScalarPoly({2: 1}), "add") == ScalarPoly([0, 2])


def test_signed_binomial_weight():
    # (-2)^3 (-1)^1 C(3,1) as a plain product is 24; the weight itself at
    # r = 4, s = 3 is (-8)(-1)(4) = 32
    assert (-2) ** 3 * (-1) ** 1 * 3 == 24
    assert signed_binomial_weight(4, 3) == 32


def test_phi_g2_x_part(t4):
    image = phi_k_image(("G", 2), 1, t4) - t4.G[2]
    assert image.coefficients() == {(): ScalarPoly([0, 2, -1])}


# -- normal forms --------------------------------------------------------------


def test_normal_form_examples():
    g = Y.T(-1, 0, 1)
    assert normal_form([(1, [g])], Y) == T(-1, 0, 1)
    a, b = sorted([Y.T(1, 1, 1), Y.T(0, -1, 2)])
    assert normal_form([(1, [a, b])], Y).terms == {(a, b): 1}
    e = T(0, 1, 2)
    assert Element.one(Y) * e == e
    for i, j, r in product(I3, I3, (1, 2)):
        assert not Y.bracket(Y.T(i, j, r), Y.T(i, j, r))


def test_level_one_swap():
    for i, j, k, l in product(I3, repeat=4):
        g, h = Y.T(i, j, 1), Y.T(k, l, 1)
        if g <= h:
            continue
        expected = T(k, l, 1) * T(i, j, 1)
        if k == j:
            expected = expected + T(i, l, 1)
        if i == l:
            expected = expected - T(k, j, 1)
        assert normal_form([(1, [g, h])], Y) == expected


def test_gl1_is_a_polynomial_ring():
    U = gl1_spec()
    e = Element.gen(U, 0)
    assert e * Element.x(U) == Element.x(U) * e
    assert normal_form([(1, [0, 0])], U) == e * e


# -- series --------------------------------------------------------------------


def test_series_examples(t4):
    S = t4.S.series(-1, 0)
    one = ElementSeries.unit(Y3(), 4)
    assert S * one == S
    assert series_inverse(one) == one
    assert substitute_linear(S, 1, 0) == S
    flipped = substitute_linear(S, -1, 0)
    assert all(flipped[m] == S[m].scale((-1) ** m) for m in range(5))
    assert substitute_linear(substitute_linear(S, 1, 2), 1, -2) == S
    ident = SeriesMatrix.identity(Y3(), 3, 4)
    assert ident * ident == ident
    D = SeriesMatrix([[t4.series("D", i, j) for j in PM] for i in PM])
    assert D * D.inverse() == SeriesMatrix.identity(Y3(), 2, 4)


def test_cleared_examples(t8):
    assert cleared_identity_check([], []).passed
    rel = eq_ss_relation(-1, -1, -1, -1)
    get = lambda name, i, j: t8.S.series(i, j)  # noqa: E731
    lhs = [realize(s, get) for s in rel.lhs]
    rhs = [realize(s, get) for s in rel.rhs]
    assert cleared_identity_check(lhs, rhs, window=(6, 6)).passed
    bad = rel.mutated()
    res = cleared_identity_check(lhs, [realize(s, get) for s in bad.rhs], window=(6, 6))
    assert not res.passed and res.residual_terms > 0


# -- twisted Yangian -------------------------------------------------------------


def test_s_two_from_series_product():
    s = build_s_table(2)
    for i, j in product(I3, repeat=2):
        acc = Element.zero(Y)
        for k in I3:
            # coefficient of u^-2 in T_{-k,-i}(-u) T_{k,j}(u)
            for p in range(3):
                a = T(-k, -i, p).scale((-1) ** p) if p else Element.scalar(Y, int(k == i))
                b = T(k, j, 2 - p) if p < 2 else Element.scalar(Y, int(k == j))
                acc = acc + a * b
        assert s[i, j, 2] == acc


def test_transpose_symmetry_at_level_one():
    s = build_s_table(1)
    for i, j in product(I3, repeat=2):
        assert s[i, j, 1] == -s[-j, -i, 1]


def test_admissibility_examples():
    assert admissible(-1, -1, 1)
    assert not admissible(0, 0, 1)
    assert admissible(0, 0, 2)


def test_weight_one_monomials():
    assert monomials_of_weight(DRINFELD, 1) == [(("D", -1, -1, 1),), (("E", -1, 1),), (("E", 1, 1),)]
    assert monomials_of_weight(MNO_S, 1) == [(("S", -1, -1, 1),), (("S", -1, 0, 1),), (("S", 0, -1, 1),)]
    assert len(monomials_of_weight(MNO_S, 2)) == len(monomials_of_weight(DRINFELD, 2)) == 12


def test_unit_coordinate(t4):
    assert solve_coordinates(t4.S[-1, 0, 1], MNO_S, 1, t4) == {(("S", -1, 0, 1),): ScalarPoly(1)}


# -- verifier ------------------------------------------------------------------


def test_level_zero_and_fes(t4):
    res = {r.instance: r for r in V.verify_theorem_1_1(t4, families=["oD1", "FEs", "GG"])}
    assert all(res[f"oD1(D,{i},{j})"].passed for i in PM for j in PM)
    assert res["oD1(G)"].passed and res["oD1(E,1)"].passed and res["oD1(F,-1)"].passed
    assert res["FEs(1,1)"].passed and res["FEs(-1,1)"].passed
    assert all(r.passed for r in res.values() if r.key["family"] == "GG")
    for i in PM:
        assert t4.F[-i, 1] == -t4.E[i, 1]


def test_dd_instance(t4):
    res = V.verify_theorem_3_1(t4, items=["DD"])
    assert {r.instance: r.passed for r in res}["DD(-1,1,1,-1)"]


def test_efsym_at_order_one(t4):
    # E_i(-u) = F_{-i}(u-2) at u^-1 reads -E_i^(1) = F_{-i}^(1)
    for i in PM:
        lhs = substitute_linear(t4.series("E", i), -1, 0)[1]
        rhs = substitute_linear(t4.series("F", -i), 1, -2)[1]
        assert lhs == rhs == -t4.E[i, 1]
    assert {r.family for r in series_relations(["EFsym"])} == {"EFsym"}


def test_iota_bracket():
    res = {r.instance: r for r in V.verify_molev_maps()}
    assert res["iota(f[-1,0],f[0,-1])"].passed


def test_properness_k1(t4):
    res = V.verify_shifted(t4, 1, 3)
    assert {r.instance: r.passed for r in res}["proper(E[1;1] in SHIFTED(1),1)"]


@pytest.mark.parametrize("k", [1, 2])
def test_phi_images(t6, k):
    res = {r.instance: r for r in V.verify_phi_k(t6, k)}
    de = [f"phi{k}:DEreln({i},{j},{l},1,{k + 1})" for i in PM for j in PM for l in PM]
    ee = [f"phi{k}:EEreln({i},{j},{k + 1},{k + 1})" for i in PM for j in PM]
    for name in de + ee:
        assert res[name].passed, name


# -- command line and cache ------------------------------------------------------


def test_cli_examples(tmp_path, capsys):
    report = tmp_path / "t11.json"
    assert main(["verify", "--suite", "theorem11", "--max-weight", "6", "--no-cache", "--report", str(report)]) == 0
    doc = json.loads(report.read_text())
    ids = {i["id"] for i in doc["suites"][0]["instances"]}
    assert "EFreln(1,-1,2,4)" in ids and "GG(2,4)" in ids
    report = tmp_path / "pbw.json"
    assert main(["verify", "--suite", "pbw", "--max-weight", "1", "--no-cache", "--report", str(report)]) == 0
    ranks = [i for i in json.loads(report.read_text())["suites"][0]["instances"] if i["key"]["family"] == "rank"]
    assert [(i["key"]["count"], i["key"]["rank"]) for i in ranks] == [(3, 3)] * 3
    assert main(["verify", "--suite", "theorem11", "--mutate", "EQ:GG", "--no-cache"]) == 1


def test_cache_examples(tmp_path, t4, t8):
    cache_tables(t4, tmp_path)
    assert table_entries(load_tables(tmp_path, 4)) == table_entries(t4)
    cache_tables(t8, tmp_path / "big")
    view = load_tables(tmp_path / "big", 6)
    assert view.N == 6 and table_entries(view) == table_entries(t8.truncate(6))
