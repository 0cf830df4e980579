# tests/test_counterexample.py

import numpy as np
import pytest

from conformext.exceptions import GroupExhausted, TailConvergent, TruncationTooShort, WindowOverflow
from conformext.services.counterexample import (
    SPOT_CHECKS,
    base_sequences,
    cap_phi_integral,
    chain_offsets,
    grouping_indices,
    laplace_phi,
    segment_plan,
    verify_counterexample,
)
from conformext.services.phi import phi_alpha, phi_eval


@pytest.fixture(scope="module")
def alpha_one_sequences():
    return base_sequences(phi_alpha(1.0), N=100_000)


def test_sequences_start_at_zero_and_decrease(alpha_one_sequences):
    seq = alpha_one_sequences
    assert seq.a[0] == 0.0 and seq.b[0] == 0.0
    assert seq.a[1] == pytest.approx(np.log(np.e + 1.0) ** (-1.0 / 3.0))
    assert seq.a[1] == pytest.approx(0.9132, abs=1e-4)
    assert seq.nonincreasing
    np.testing.assert_allclose(seq.b[1:4], np.cumsum(seq.a[0:3]), rtol=1e-14)


def test_ratio_constant(alpha_one_sequences):
    seq = alpha_one_sequences
    assert seq.c_M_index == 1
    assert seq.c_M == pytest.approx(2.99, abs=0.01)
    assert seq.M == pytest.approx(1.246, abs=0.01)
    assert seq.ratio_bound_holds


def test_sum_of_a_is_witnessed_divergent(alpha_one_sequences):
    witness = alpha_one_sequences.witness
    assert witness is not None
    assert witness.kind == "diverges"
    assert witness.witness >= 1.0


def test_convergent_tail_is_refused():
    with pytest.raises(TailConvergent) as err:
        base_sequences(phi_alpha(2.0), N=1000)
    assert err.value.exit_code == 5


def test_grouping_masses(alpha_one_sequences):
    grouping = grouping_indices(alpha_one_sequences.a, 6)
    assert grouping.i[0] == 1 and grouping.i[1] == 2
    assert np.all(np.diff(grouping.i) >= 0)
    assert grouping.mass_bound_holds
    assert grouping.tail_exponent > 1.0
    hat = alpha_one_sequences.a * grouping.scale
    total = np.sum(hat[1:] ** 2) + grouping.tail_mass
    assert total == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_grouping_needs_enough_terms(alpha_one_sequences):
    with pytest.raises(TruncationTooShort):
        grouping_indices(alpha_one_sequences.a, 16)


def test_segment_windows(alpha_one_plan):
    for plan in alpha_one_plan.segments:
        assert plan.window_violations() == []
        assert plan.windows[0][0] == plan.first_index + plan.entry_guard
        lo, hi = alpha_one_plan.grouping.group(plan.n)
        assert plan.first_index == lo and plan.windows[-1][1] == hi + 1


def test_windows_of_equal_terms():
    a = np.array([0.0, 1.0] + [0.125] * 8 + [0.1])
    plan = segment_plan(a, 2.0, np.array([0, 1, 9]), 2)
    assert plan.window_violations() == []
    assert plan.windows[0] == (2, 3) and plan.windows[-1] == (8, 10)
    np.testing.assert_allclose(plan.window_sums[:-1], 0.125)
    assert plan.guards == [0] * 6
    assert not plan.final_short


def test_window_over_twice_the_level_is_refused():
    a = np.array([0.0, 2.0, 1.5, 1.0, 0.5, 0.4, 0.3, 0.2])
    with pytest.raises(WindowOverflow) as err:
        segment_plan(a, 2.0, np.array([0, 6]), 1)
    assert err.value.context["group"] == 1
    assert err.value.context["total"] == pytest.approx(2.0)


def test_empty_group_is_reported(alpha_one_plan):
    i = np.array([1, 2, 2, 5])
    with pytest.raises(GroupExhausted):
        segment_plan(alpha_one_plan.a, alpha_one_plan.c_M, i, 2)


def test_folded_layout_is_simple_and_clear(alpha_one_plan):
    layout = alpha_one_plan.layout
    assert layout.groups == [1, 2, 3, 4]
    assert np.all(layout.clearances > 0)
    assert np.all(layout.widths > 0)
    assert layout.cap_radius == pytest.approx(alpha_one_plan.c_M * alpha_one_plan.a[1])
    assert layout.domain.n_vertices > layout.n_gates


def test_laplace_and_cap_integrals():
    identity = phi_alpha(0.0)
    np.testing.assert_allclose(laplace_phi(identity, np.array([0.0, 2.0])), [1.0, 3.0], rtol=1e-12)
    # integral of u (1 - e^-u) e^-u du = 3/4
    assert cap_phi_integral(identity, 2.0) == pytest.approx(3.0 * np.pi, rel=1e-8)


def test_chain_offsets():
    a = np.array([0.0, 4.0, 2.0, 1.0, 0.5])
    np.testing.assert_allclose(chain_offsets(a, 2.0, 3), [1.0, 2.0, 3.0])


def test_verification_of_the_alpha_one_domain(alpha_one_plan):
    report = verify_counterexample(alpha_one_plan, pitch=0.02, spot_checks=SPOT_CHECKS, seed=0)
    assert report.square_sum.converges
    assert report.square_converged
    assert report.integral_bounded
    assert report.diameter_grows
    assert np.all(np.diff(report.diameters) > 0)
    assert np.all(report.diameters <= report.diameter_upper + 1e-12)
    assert len(report.spot_checks) == SPOT_CHECKS
    assert all(check.within_factor for check in report.spot_checks)


def test_trapezoid_integrals_stay_under_their_bounds(alpha_one_plan):
    report = verify_counterexample(alpha_one_plan)
    plan = alpha_one_plan
    count = report.trapezoid_integrals.size
    a = plan.a[1:count + 1]
    phi_n = phi_eval(plan.spec, np.arange(1, count + 1, dtype=float))
    assert np.all(report.trapezoid_integrals <= 2.0 * plan.c_M * plan.sequences.M * a ** 2 * (phi_n + 3.0))


def test_verification_report_lists_failures(alpha_one_plan):
    report = verify_counterexample(alpha_one_plan)
    assert report.passed and report.failures() == []
    broken = report.copy(update={"square_converged": False})
    assert not broken.passed
    assert broken.failures() == ["square_converged"]


@pytest.mark.slow
def test_six_group_windows_and_layout(alpha_six_plan):
    plan = alpha_six_plan
    for segment in plan.segments:
        assert segment.window_violations() == []
        assert np.all(segment.window_sums[:-1] <= 2.0 * segment.level_length)
    layout = plan.layout
    assert layout.groups == [n for n in range(1, 7) if n not in plan.grouping.merged]
    assert layout.groups[:4] == [1, 2, 3, 4]
    assert np.all(layout.clearances > 0)


@pytest.mark.slow
def test_six_group_widths_extend_the_four_group_layout(alpha_one_plan, alpha_six_plan):
    # walls of a group depend only on its own gates, so extra groups leave earlier widths alone
    np.testing.assert_allclose(alpha_six_plan.layout.widths[:4], alpha_one_plan.layout.widths, rtol=1e-9)
    assert alpha_six_plan.layout.width_constant >= alpha_one_plan.layout.width_constant


@pytest.mark.slow
def test_six_group_widths_are_summable(alpha_six_plan):
    layout = alpha_six_plan.layout
    ratios = layout.width_constants
    fitted = np.maximum.accumulate(ratios)
    for k, n in enumerate(layout.groups):
        C = fitted[k]
        assert np.all(layout.widths[:k + 1] <= C * layout.level_lengths[:k + 1] * (1.0 + 1e-12))
        assert layout.widths[k] < 2.0 ** (-n + 2) * C
    # the fitted constant settles once the early groups are in
    assert fitted[-1] <= 2.0 * fitted[2]
    assert layout.width_sum <= 2.0 * fitted[-1] * layout.level_lengths[0]


@pytest.mark.slow
def test_six_group_verification(alpha_six_plan):
    report = verify_counterexample(alpha_six_plan)
    assert report.passed
    assert np.all(np.diff(report.diameters) > 0)
