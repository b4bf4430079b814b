import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guiltsim.game import (
    STRATEGIES,
    DonationParams,
    GameSpec,
    GuiltParams,
    PayoffEntries,
    Strategy,
    coop_matrix,
    donation_payoffs,
    guilt_trigger,
    payoff_matrix,
    simulate_encounter,
)

C, D, DGDN, DGCN, DGDS, DGCS = STRATEGIES


def make_spec(b=2.0, c=1.0, omega=10, gamma=1.0, gamma_s=0.0):
    return GameSpec(
        payoffs=donation_payoffs(DonationParams(b=b, c=c)),
        omega=omega,
        guilt=GuiltParams(gamma=gamma, gamma_s=gamma_s),
    )


game_specs = st.builds(
    lambda c, margin, omega, gamma, gamma_s: make_spec(
        b=c + margin, c=c, omega=omega, gamma=gamma, gamma_s=gamma_s
    ),
    c=st.floats(0.1, 3),
    margin=st.floats(0.05, 5),
    omega=st.integers(1, 25),
    gamma=st.floats(0, 10),
    gamma_s=st.floats(0, 5),
)


class TestStrategy:
    def test_matrix_order(self):
        assert [s.name for s in STRATEGIES] == ["C", "D", "DGDN", "DGCN", "DGDS", "DGCS"]
        assert [s.index for s in STRATEGIES] == list(range(6))

    def test_derived_attributes(self):
        assert C.guilt_threshold == math.inf and D.guilt_threshold == math.inf
        assert all(s.guilt_threshold == 0 for s in (DGDN, DGCN, DGDS, DGCS))
        assert {s for s in STRATEGIES if s.adaptive} == {DGCN, DGCS}
        assert {s for s in STRATEGIES if s.social} == {DGDS, DGCS}
        assert C.initial_action == "C"
        assert all(s.initial_action == "D" for s in STRATEGIES if s is not C)

    def test_unemotional_never_adaptive_or_social(self):
        for s in (C, D):
            assert not s.adaptive and not s.social


class TestParams:
    def test_donation_mapping(self):
        assert donation_payoffs(DonationParams(2, 1)) == PayoffEntries(2, 1, 0, -1)
        assert donation_payoffs(DonationParams(4, 1)) == PayoffEntries(4, 3, 0, -1)

    def test_donation_rejects_b_le_c(self):
        with pytest.raises(ValueError, match="b > c"):
            DonationParams(2, 2)

    def test_donation_rejects_nonpositive_c(self):
        with pytest.raises(ValueError, match="c > 0"):
            DonationParams(2, 0)

    def test_donation_satisfies_pd_ordering(self):
        # b > c > 0 implies both PD inequalities automatically
        donation_payoffs(DonationParams(1.01, 1.0))
        donation_payoffs(DonationParams(100, 0.1))

    def test_payoff_ordering_enforced(self):
        with pytest.raises(ValueError, match="T > R > P > S"):
            PayoffEntries(T=1, R=2, P=0, S=-1)
        with pytest.raises(ValueError, match="2R > T"):
            PayoffEntries(T=10, R=3, P=0, S=-1)

    def test_guilt_params_nonnegative(self):
        with pytest.raises(ValueError, match="gamma"):
            GuiltParams(-0.1, 0)
        with pytest.raises(ValueError, match="gamma_s"):
            GuiltParams(0, -0.1)

    def test_omega_at_least_one(self):
        with pytest.raises(ValueError, match="omega"):
            make_spec(omega=0)


class TestGuiltTrigger:
    def test_non_social_always_triggers(self):
        for focal in (DGDN, DGCN):
            for opp in STRATEGIES:
                assert guilt_trigger(focal, opp)

    def test_social_triggers_against_everyone_but_d(self):
        for focal in (DGDS, DGCS):
            assert not guilt_trigger(focal, D)
            for opp in (C, DGDN, DGCN, DGDS, DGCS):
                assert guilt_trigger(focal, opp)

    def test_unemotional_focal_is_contract_violation(self):
        for focal in (C, D):
            with pytest.raises(ValueError):
                guilt_trigger(focal, D)


class TestEncounter:
    def test_adaptive_nonsocial_vs_defector(self):
        # one defection with guilt paid, then sucker payoffs for the rest
        spec = make_spec(b=2, c=1, omega=10, gamma=1, gamma_s=0)
        tr = simulate_encounter(DGCN, D, spec)
        assert tr.focal_average == pytest.approx(-1.0, abs=1e-12)
        assert [r.focal_action for r in tr.rounds] == ["D"] + ["C"] * 9
        assert sum(r.gamma_paid for r in tr.rounds) == 1.0

    def test_adaptive_social_vs_cooperator(self):
        spec = make_spec(b=2, c=1, omega=10, gamma=1, gamma_s=1)
        tr = simulate_encounter(DGCS, C, spec)
        assert tr.focal_average == pytest.approx(0.9, abs=1e-12)
        assert sum(1 for r in tr.rounds if r.gamma_s_paid > 0) == 1

    def test_mutual_cooperation(self):
        for omega in (1, 7, 30):
            spec = make_spec(omega=omega, gamma=3, gamma_s=2)
            tr = simulate_encounter(C, C, spec)
            assert tr.focal_average == spec.payoffs.R
            assert all(r.focal_action == "C" for r in tr.rounds)
            assert all(r.gamma_paid == 0 and r.gamma_s_paid == 0 for r in tr.rounds)

    def test_social_adaptive_never_switches_against_d(self):
        spec = make_spec(omega=8, gamma=5, gamma_s=0.5)
        tr = simulate_encounter(DGCS, D, spec)
        assert all(r.focal_action == "D" for r in tr.rounds)
        assert all(r.gamma_paid == 0 for r in tr.rounds)
        assert all(r.gamma_s_paid == 0.5 for r in tr.rounds)

    def test_guilt_counter_stays_at_zero_after_alleviation(self):
        spec = make_spec(omega=5, gamma=2)
        tr = simulate_encounter(DGDN, D, spec)
        assert all(r.g_before == 0 and r.g_after == 0 for r in tr.rounds)
        assert all(r.gamma_paid == 2 for r in tr.rounds)

    def test_totals_consistent_with_averages(self):
        spec = make_spec(omega=12, gamma=1.5, gamma_s=0.25)
        tr = simulate_encounter(DGDS, DGCN, spec)
        assert tr.focal_total == pytest.approx(tr.focal_average * spec.omega)
        assert tr.opponent_total == pytest.approx(tr.opponent_average * spec.omega)

    def test_symmetry_of_perspectives(self):
        spec = make_spec(omega=9, gamma=2, gamma_s=0.3)
        for a, b in itertools.product(STRATEGIES, repeat=2):
            ab = simulate_encounter(a, b, spec)
            ba = simulate_encounter(b, a, spec)
            assert ab.focal_average == pytest.approx(ba.opponent_average, abs=1e-12)
            assert ab.focal_coop_fraction == ba.opponent_coop_fraction


class TestPayoffMatrix:
    def test_spec_point_entries(self):
        spec = make_spec(b=2, c=1, omega=10, gamma=1, gamma_s=0)
        M = payoff_matrix(spec)
        assert M[C.index, C.index] == spec.payoffs.R
        assert M[D.index, DGCN.index] == pytest.approx(1.8, abs=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(game_specs)
    def test_oracle_equivalence(self, spec):
        M = payoff_matrix(spec)
        for a, b in itertools.product(STRATEGIES, repeat=2):
            avg = simulate_encounter(a, b, spec).focal_average
            assert M[a.index, b.index] == pytest.approx(avg, abs=1e-12)

    def test_single_round_collapses_adaptivity(self):
        M = payoff_matrix(make_spec(omega=1, gamma=2.5, gamma_s=0.75))
        np.testing.assert_array_equal(M[DGCN.index], M[DGDN.index])
        np.testing.assert_array_equal(M[DGCS.index], M[DGDS.index])

    def test_zero_social_cost_differs_only_in_d_column(self):
        M = payoff_matrix(make_spec(omega=10, gamma=2, gamma_s=0.0))
        for social, nonsocial in ((DGDS, DGDN), (DGCS, DGCN)):
            diff = M[social.index] != M[nonsocial.index]
            assert list(np.flatnonzero(diff)) in ([], [D.index])

    def test_unemotional_rows_ignore_guilt_costs(self):
        base = payoff_matrix(make_spec(gamma=0, gamma_s=0))
        other = payoff_matrix(make_spec(gamma=7, gamma_s=3))
        np.testing.assert_array_equal(base[C.index], other[C.index])
        np.testing.assert_array_equal(base[D.index], other[D.index])

    def test_entries_finite(self):
        M = payoff_matrix(make_spec(omega=25, gamma=10, gamma_s=5))
        assert M.shape == (6, 6)
        assert np.all(np.isfinite(M))


class TestCoopMatrix:
    def test_always_cooperator_and_defector_rows(self):
        M = coop_matrix(10)
        assert np.all(M[C.index] == 1.0)
        for s in (D, DGDN, DGDS):
            assert np.all(M[s.index] == 0.0)

    def test_adaptive_rows(self):
        M = coop_matrix(10)
        assert np.all(M[DGCN.index] == 0.9)
        assert M[DGCS.index, D.index] == 0.0
        for opp in (C, DGDN, DGCN, DGDS, DGCS):
            assert M[DGCS.index, opp.index] == 0.9

    @pytest.mark.parametrize("omega", [1, 2, 5, 17])
    def test_entries_within_unit_interval(self, omega):
        M = coop_matrix(omega)
        assert np.all((0.0 <= M) & (M <= 1.0))

    def test_single_round_all_defectors_never_cooperate(self):
        M = coop_matrix(1)
        assert np.all(M[C.index] == 1.0)
        assert np.all(M[1:] == 0.0)
