import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combrec.comb import CoefficientSet, build_comb, effective_triple, random_comb, to_signal
from combrec.errors import CapExceededError, DimensionError, EmptySetError, TotalErasureError
from combrec.fourier import Signal, forward_dft, indicator, inverse_dft
from combrec.lattice import Grid, LatticeSet
from combrec.recovery import (
    AMBIGUOUS,
    RECOVERED,
    CombFamily,
    ObservedSpectrum,
    brute_force_unique,
    check_classical,
    check_comb_recovery,
    check_dra,
    condition_for,
    difference_decomposition,
    difference_pieces,
    dra_recover,
    erase,
    family_for,
    ls_support_search,
    margin_chain,
    missing_part,
    observed_part,
    oracle_search,
    progression_erasure,
    random_erasure,
    transmit,
)
from combrec.recovery.conditions import THEOREMS
from combrec.restriction import exact_c22, trivial_c1q

BINARY = CoefficientSet.from_values((0, 1))


def one_part(grid, support, coeffs=BINARY, a=1):
    return build_comb(grid, [(a, grid.subset(support))], coeffs)


class TestChannel:
    def test_erase_examples(self):
        g = Grid(8)
        f = indicator(g, g.subset([1, 2]))
        F = forward_dft(f)
        obs = erase(F, g.empty())
        assert len(obs.values) == 8 and obs.observed == g.full()
        assert np.allclose(inverse_dft(obs.zero_filled()).values, f.values, atol=1e-14)
        obs = erase(F, g.subset(range(1, 8)))
        assert obs.observed == g.subset([0]) and obs.values[0] == F.values[0]
        with pytest.raises(TotalErasureError):
            erase(F, g.full())

    def test_transmit_comb_or_signal(self):
        g = Grid(6)
        c = one_part(g, [0, 3])
        S = g.subset([1])
        assert np.array_equal(transmit(c, S).values, transmit(to_signal(c), S).values)

    def test_observed_plus_missing_is_signal(self):
        rng = np.random.default_rng(4)
        g = Grid(4, 2)
        f = Signal(g, rng.normal(size=16))
        S = random_erasure(g, 5, rng)
        I = observed_part(transmit(f, S))
        assert np.allclose(I + missing_part(f, S), f.values, atol=1e-13)

    def test_erasure_models(self):
        g = Grid(10)
        assert progression_erasure(g, 4, start=8, step=3) == g.subset([8, 1, 4, 7])
        with pytest.raises(ValueError):
            progression_erasure(g, 6, step=5)
        S = random_erasure(g, 4, np.random.default_rng(0))
        assert len(S) == 4
        assert S == random_erasure(g, 4, np.random.default_rng(0))

    def test_json_roundtrip(self):
        g = Grid(3, 2)
        f = Signal(g, np.arange(9.0))
        obs = transmit(f, g.subset([(0, 1), (2, 2)]))
        data = json.loads(json.dumps(obs.to_json()))
        assert data["erased"] == [[0, 1], [2, 2]] and len(data["observed"]) == 7
        back = ObservedSpectrum.from_json(data)
        assert back.erased == obs.erased and np.array_equal(back.values, obs.values)
        data["observed"].pop()
        with pytest.raises(DimensionError):
            ObservedSpectrum.from_json(data)


class TestConditions:
    def test_classical(self):
        assert check_classical(1, 3, Grid(8)).holds
        assert not check_classical(2, 2, Grid(8)).holds
        rep = check_classical(2, 4, Grid(16))
        assert not rep.holds and rep.left == 8 and rep.right == 8

    def test_comb_l2(self):
        for N in (12, 13, 24, 64):
            g = Grid(N)
            rep = check_comb_recovery(1, 1, g, 1, 1, 1, p=2)
            assert rep.right == pytest.approx(N / 12)
            assert rep.holds == (1 < N / 12)
        assert check_comb_recovery(1, 5, Grid(64), 1, 1, 1).holds
        assert not check_comb_recovery(1, 6, Grid(64), 1, 1, 1).holds
        assert not check_comb_recovery(1, 1, Grid(1000), 1, 1e-9, 1).holds
        assert "gamma_max" in check_comb_recovery(1, 1, Grid(16), 1, 1, 1).advisory

    def test_comb_restriction(self):
        g = Grid(12)
        S = g.subset([3])
        rep = check_comb_recovery(1, 1, g, 1, 1, 1, variant="restriction",
                                  restriction=trivial_c1q(S, 2))
        assert rep.holds and rep.right == 2
        rep = check_comb_recovery(2, 1, g, 1, 1, 1, variant="restriction",
                                  restriction=exact_c22(S))
        assert rep.left == pytest.approx(math.sqrt(2))
        assert rep.right == pytest.approx(12 / (2 * math.sqrt(12) * math.sqrt(3)))
        with pytest.raises(ValueError):
            check_comb_recovery(1, 1, g, 1, 1, 1, variant="restriction")
        with pytest.raises(ValueError):
            check_comb_recovery(1, 1, g, 1, 1, 1, p=1, variant="l2")

    def test_dra_l1_is_classical_for_indicators(self):
        for N in (8, 16, 21):
            g = Grid(N)
            for a, s in itertools.product(range(1, 8), range(0, 12)):
                assert check_dra(a, s, g, 1, 1, 1, "l1").holds == check_classical(a, s, g).holds

    def test_dra_examples(self):
        assert check_dra(1, 7, Grid(16), 1, 1, 1, "l1").holds
        assert not check_dra(1, 8, Grid(16), 1, 1, 1, "l1").holds
        assert check_dra(100, 0, Grid(4), 3, 0.5, 2, "l2").holds
        rep = check_dra(1, 0, Grid(4), 1, 1, 1, "restriction")
        assert rep.holds and math.isinf(rep.right)

    def test_dra_restriction(self):
        g = Grid(16)
        S = g.subset([1, 2, 3])
        rep = check_dra(2, 3, g, 1, 1, 1, "restriction", restriction=exact_c22(S))
        C = math.sqrt(16 / 3)
        assert rep.left == pytest.approx(math.sqrt(2) * 3)
        assert rep.right == pytest.approx(16 / (2 * C))
        assert rep.holds == (math.sqrt(2) * 3 < 16 / (2 * C))

    def test_strict_boundary(self):
        # N / (2 gamma) (delta / M) = 4 exactly
        assert not check_dra(2, 2, Grid(16), 1, 1, 2, "l1").holds
        assert check_dra(1, 3, Grid(16), 1, 1, 2, "l1").holds

    def test_json(self):
        rep = check_dra(1, 0, Grid(4), 1, 1, 1, "restriction")
        data = json.loads(json.dumps(rep.to_json()))
        assert data["right"] == "inf" and data["holds"] is True

    def test_condition_for_picks_effective_support(self):
        g = Grid(7)
        c = build_comb(g, [(1.5, g.subset([0])), (0.5, g.subset(range(1, 7)))])
        assert condition_for(c, 1, "dra-l1").inputs["A1_size"] == 6
        assert condition_for(c, 1, "dra-l2").inputs["A1_size"] == 1
        assert condition_for(c, 1, "classical").inputs["E_size"] == 7
        S = g.subset([2])
        for theorem in THEOREMS:
            restriction = trivial_c1q(S, 2) if theorem.endswith("restriction") else None
            condition_for(c, 1, theorem, restriction=restriction)


class TestDRA:
    def test_lossless_channel(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            g = Grid(int(rng.integers(2, 20)))
            c = random_comb(g, rng, int(rng.integers(1, min(g.size, 3) + 1)))
            out = dra_recover(transmit(c, g.empty()), c.coefficient_set)
            assert out.status == RECOVERED and out.result == c

    def test_single_point_with_seven_erasures(self):
        g = Grid(16)
        c = one_part(g, [5])
        assert check_dra(1, 7, g, 1, 1, 1, "l1").holds
        F = forward_dft(to_signal(c))
        for seed in range(500):
            S = random_erasure(g, 7, np.random.default_rng(seed))
            out = dra_recover(erase(F, S), BINARY)
            assert out.status == RECOVERED and out.result == c
            assert out.certificate["max_margin"] < 0.5

    def test_oracle_counterexample_is_ambiguous(self):
        g = Grid(8)
        f = one_part(g, [0, 4])
        S = g.subset([1, 2, 3, 5, 6, 7])
        assert not check_dra(2, len(S), g, 1, 1, 1, "l1").holds
        found = brute_force_unique(transmit(f, S), CombFamily(BINARY, 1))
        assert f in found and one_part(g, [2, 6]) in found
        out = dra_recover(transmit(f, S), BINARY)
        assert out.status == AMBIGUOUS and out.result is None
        assert out.certificate["ambiguous_points"]

    def test_accepts_plain_values_and_rejects_empty(self):
        g = Grid(4)
        obs = transmit(one_part(g, [1]), g.empty())
        assert dra_recover(obs, [0, 1]).status == RECOVERED
        with pytest.raises(EmptySetError):
            dra_recover(obs, [])

    def test_json(self):
        g = Grid(4)
        out = dra_recover(transmit(one_part(g, [1]), g.subset([2])), BINARY)
        data = json.loads(json.dumps(out.to_json()))
        assert data["status"] == RECOVERED and data["result"]["gamma"] == 1
        assert data["certificate"]["half_delta"] == 0.5

    @given(st.integers(8, 24), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_margin_chain(self, N, seed):
        rng = np.random.default_rng(seed)
        g = Grid(N)
        cset = CoefficientSet.from_values((0, 1, 2, -1j))
        c = random_comb(g, rng, int(rng.integers(1, 3)), cset, None)
        A1 = len(effective_triple(c, 1).support)
        limit = math.ceil(N / (2 * c.gamma * A1) * c.delta / c.M) - 1
        if limit < 0:
            return
        S = random_erasure(g, int(rng.integers(0, limit + 1)), rng)
        assert check_dra(A1, len(S), g, c.gamma, c.delta, c.M, "l1").holds
        chain = margin_chain(to_signal(c), S, A1, c.gamma, c.M)
        assert chain["max_II"] <= chain["bound"] + 1e-12
        assert chain["bound"] < c.delta / 2
        out = dra_recover(transmit(c, S), cset)
        assert out.status == RECOVERED and out.result == c


class TestSupportSearch:
    def test_single_point(self):
        g = Grid(8)
        f = one_part(g, [3])
        out = ls_support_search(transmit(f, g.subset([1, 4, 6])), 1)
        assert out.status == RECOVERED and out.result == f
        assert out.certificate["best_support"] == [[3]]

    def test_full_support_is_ambiguous(self):
        g = Grid(6)
        out = ls_support_search(transmit(one_part(g, [0, 1]), g.subset([2])), 6)
        assert out.status == AMBIGUOUS

    def test_identical_columns_are_ambiguous(self):
        g = Grid(4)
        out = ls_support_search(transmit(one_part(g, [0]), g.subset([1, 3])), 1)
        assert out.status == AMBIGUOUS
        assert [[0]] in out.certificate["near_ties"] and [[2]] in out.certificate["near_ties"]

    def test_zero_support(self):
        g = Grid(5)
        out = ls_support_search(transmit(build_comb(g, []), g.subset([1])), 0)
        assert out.status == RECOVERED and out.result.is_zero()

    def test_all_sizes(self):
        g = Grid(8)
        f = build_comb(g, [(2, g.subset([1])), (-1, g.subset([5]))])
        out = ls_support_search(transmit(f, g.subset([3])), 3, all_sizes=True)
        assert out.status == AMBIGUOUS  # supersets of the true support also fit exactly
        out = ls_support_search(transmit(f, g.subset([3])), 2)
        assert out.status == RECOVERED
        assert np.allclose(to_signal(out.result).values, to_signal(f).values, atol=1e-9)

    def test_cap(self):
        g = Grid(30)
        with pytest.raises(CapExceededError):
            ls_support_search(transmit(one_part(g, [0]), g.empty()), 10, cap=1000)
        with pytest.raises(ValueError):
            ls_support_search(transmit(one_part(g, [0]), g.empty()), 31)


class TestOracle:
    def test_single_point_z8(self):
        g = Grid(8)
        erasures = [LatticeSet(g, s) for r in range(4) for s in itertools.combinations(range(8), r)]
        for x in range(8):
            f = one_part(g, [x])
            for S in erasures:
                assert check_classical(1, len(S), g).holds
                found = brute_force_unique(transmit(f, S), family_for(f, 2.0))
                assert found == [f]

    def test_z4_odd_erasures(self):
        g = Grid(4)
        cset = CoefficientSet.from_values((0, 1, 2))
        f = one_part(g, [0, 2], cset)
        S = g.subset([1, 3])
        obs = transmit(f, S)
        free = set(brute_force_unique(obs, CombFamily(cset, 1)))
        expected = {f, one_part(g, [0], cset, 2), one_part(g, [2], cset, 2)}
        assert free == expected
        assert set(brute_force_unique(obs, family_for(f, 1.0))) == expected
        assert brute_force_unique(obs, family_for(f, 2.0)) == [f]
        assert not check_comb_recovery(2, 2, g, 1, 1, 2).holds

    def test_no_erasure(self):
        rng = np.random.default_rng(3)
        g = Grid(6)
        cset = CoefficientSet.from_values((0, 1, 1j))
        for _ in range(20):
            f = random_comb(g, rng, 2, cset)
            assert brute_force_unique(transmit(f, g.empty()), family_for(f, 2.0)) == [f]

    def test_three_letter_alphabet_lossless(self):
        cset = CoefficientSet.from_values((0, 1, 2))
        for N in range(2, 7):
            g = Grid(N)
            for values in itertools.product((0, 1, 2), repeat=N):
                f = build_comb(g, [(a, g.subset([i for i, v in enumerate(values) if v == a]))
                                   for a in (1, 2)], cset)
                assert brute_force_unique(transmit(f, g.empty()), family_for(f, 2.0)) == [f]

    def test_near_boundary_is_counted(self):
        g = Grid(4)
        f = one_part(g, [1])
        obs = transmit(f, g.subset([2]))
        res = oracle_search(obs, CombFamily(BINARY, 1, 2.0, 1 + 1e-7))
        assert res.candidates == () and res.near_boundary == 1
        res = oracle_search(obs, CombFamily(BINARY, 1, 2.0, 1 + 1e-12))
        assert res.candidates == (f,) and res.near_boundary == 0

    def test_cap_and_env(self, monkeypatch):
        g = Grid(10)
        obs = transmit(one_part(g, [0]), g.empty())
        with pytest.raises(CapExceededError):
            brute_force_unique(obs, CombFamily(BINARY, 1), cap=1000)
        monkeypatch.setenv("COMBREC_CAP", "100")
        with pytest.raises(CapExceededError):
            brute_force_unique(obs, CombFamily(BINARY, 1))
        monkeypatch.setenv("COMBREC_CAP", "2048")
        assert len(brute_force_unique(obs, CombFamily(BINARY, 1))) == 1

    def test_family_validation(self):
        with pytest.raises(ValueError):
            CombFamily(BINARY, 1, mass=1.0)


class TestDifference:
    def test_self_difference_is_zero(self):
        c = random_comb(Grid(9), np.random.default_rng(0), 3)
        assert difference_decomposition(c, c).is_zero()

    def test_disjoint_supports(self):
        g = Grid(8)
        f = build_comb(g, [(1, g.subset([0])), (2, g.subset([1, 2]))])
        h = build_comb(g, [(3, g.subset([4])), (4j, g.subset([5, 6]))])
        assert difference_decomposition(f, h).gamma == 4

    def test_pieces(self):
        g = Grid(6)
        f = build_comb(g, [(1, g.subset([0, 1])), (2, g.subset([2]))])
        h = build_comb(g, [(1, g.subset([1, 2])), (3, g.subset([4]))])
        pieces = {origin: (coeff, s) for coeff, s, origin in difference_pieces(f, h)}
        assert pieces["A1&B0"] == (1, g.subset([2]))
        assert pieces["A0-B"] == (1, g.subset([0]))
        assert pieces["B1-A"] == (-3, g.subset([4]))
        assert "A0&B0" not in pieces  # equal coefficients cancel

    def test_grid_mismatch(self):
        with pytest.raises(DimensionError):
            difference_decomposition(one_part(Grid(4), [0]), one_part(Grid(5), [0]))

    @given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.booleans())
    @settings(max_examples=100, deadline=None)
    def test_bound_and_signal_identity(self, gamma, seed, integral):
        rng = np.random.default_rng(seed)
        g = Grid(int(rng.integers(max(2, gamma), 20)))
        alphabet = (0, 1, 2, 3, -1, -2) if integral else None
        f = random_comb(g, rng, gamma, alphabet)
        h = random_comb(g, rng, gamma, alphabet)
        d = difference_decomposition(f, h)
        assert d.gamma <= gamma**2 + 2 * gamma
        lhs = to_signal(d).values + to_signal(h).values
        if integral:
            assert np.array_equal(lhs, to_signal(f).values)
        else:
            assert np.allclose(lhs, to_signal(f).values, rtol=0, atol=1e-12)
