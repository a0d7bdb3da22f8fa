"""Verification suites at small windows, and their negative controls."""

import pytest

from ty3 import verify as V
from ty3.results import FAIL, PASS


def blocking(results):
    return [r for r in results if r.status == FAIL and not r.key.get("diagnostic")]


def by_id(results):
    return {r.instance: r for r in results}


def test_rtt_kernel_small():
    res = V.verify_rtt_kernel(3)
    assert len(res) == 81 and all(r.passed for r in res)


def test_rtt_kernel_jobs_do_not_change_results():
    a = V.verify_rtt_kernel(2)
    b = V.verify_rtt_kernel(2, jobs=2)
    assert [(r.instance, r.status) for r in a] == [(r.instance, r.status) for r in b]


def test_rtt_and_ss(t4):
    res = V.verify_rtt_and_ss(t4, rtt_levels=3)
    assert len(res) == 81 + 81 + 9
    assert not blocking(res)


def test_level_relations(t4):
    res = V.verify_theorem_1_1(t4)
    assert not blocking(res)
    verdict = by_id(res)["oDs[protocol]"]
    assert verdict.passed and verdict.key["holding"] == ["derived"]


def test_level_relations_window(t4):
    with pytest.raises(V.WindowError):
        V.verify_theorem_1_1(t4, 5)


def test_series_identities(t4):
    res = V.verify_theorem_3_1(t4)
    bad = blocking(res)
    # only the printed EE / FF identities fail, and only for i = -j
    assert bad and all(r.key["family"] in ("EE", "FF") for r in bad)
    assert all(r.key["indices"][0] == -r.key["indices"][1] for r in bad)
    corrected = [r for r in res if r.key.get("variant") == "corrected"]
    assert len(corrected) == 8 and all(r.passed for r in corrected)
    assert by_id(res)["Dsym[protocol]"].passed


def test_so3_maps():
    res = V.verify_molev_maps()
    iota = [r for r in res if r.key["family"] == "iota"]
    assert len(iota) == 9 and all(r.passed for r in iota)
    shifted = [r for r in res if r.key.get("variant") == "shifted"]
    assert len(shifted) == 81 and all(r.passed for r in shifted)
    printed = [r for r in res if r.key.get("variant") == "printed"]
    assert sum(not r.passed for r in printed) == 30


def test_pbw(t4):
    res = V.verify_pbw(t4, 4)
    assert all(r.passed for r in res)
    ranks = {r.instance: r.key["rank"] for r in res if r.key["family"] == "rank"}
    assert ranks["rank(MNO_S,1)"] == 3 and ranks["rank(DRINFELD,2)"] == 12


@pytest.mark.parametrize("k", [1, 2])
def test_shifted(t4, k):
    res = V.verify_shifted(t4, k, 4)
    assert all(r.passed for r in res)
    assert any(r.key["family"] == "proper" for r in res)


@pytest.mark.parametrize("k", [1, 2])
def test_phi(t4, k):
    res = V.verify_phi_k(t4, k)
    assert res and all(r.passed for r in res)


def test_center(t4):
    res = V.verify_center(t4, W_max=4)
    assert all(r.passed for r in res)


def test_expected_slice_count():
    assert [V.expected_slice_count(V._generators_per_level, w) for w in range(1, 5)] == [3, 12, 31, 87]


@pytest.mark.parametrize("suite,fn", [
    ("rtt", lambda t: V.verify_rtt_kernel(2, mutate="RTT")),
    ("ss", lambda t: V.verify_rtt_and_ss(t, mutate="EQ:SS", rtt_levels=1)),
    ("theorem11", lambda t: V.verify_theorem_1_1(t, mutate="EQ:DEreln", families=["DEreln"])),
    ("theorem31", lambda t: V.verify_theorem_3_1(t, mutate="DD", items=["DD"])),
    ("molev", lambda t: V.verify_molev_maps(mutate="iota")),
    ("pbw", lambda t: V.verify_pbw(t, 3, mutate="rank")),
    ("shifted", lambda t: V.verify_shifted(t, 1, 3, mutate="closure")),
    ("phi", lambda t: V.verify_phi_k(t, 1, mutate="GEreln")),
    ("center", lambda t: V.verify_center(t, W_max=3, mutate="sdet")),
])
def test_mutation_hooks_fail(t4, suite, fn):
    assert blocking(fn(t4)), suite


def test_gg_mutation_needs_a_wider_window(t4, t6):
    # G^(1) = 0 and [G^(m), G^(m)] = 0, so the first nontrivial instance is m + n = 5
    assert not blocking(V.verify_theorem_1_1(t4, mutate="GG", families=["GG"]))
    bad = blocking(V.verify_theorem_1_1(t6, mutate="GG", families=["GG"]))
    assert {r.instance for r in bad} >= {"GG(2,3)"}
