import math

import numpy as np
import pytest

from oscbayes import model, oscillations
from oscbayes.oscillations import IntervalSet

C = model.FamilySpec.cosine()
G0 = (C, 0.0)


def test_exceedance_intervals_for_one_period():
    s = oscillations.exceedance_intervals((C, 2 * math.pi), G0)
    assert len(s) == 2
    (a0, b0), (a1, b1) = s.intervals
    assert (a0, a1, b1) == (0.0, pytest.approx(0.75, abs=1e-10), 1.0)
    assert b0 == pytest.approx(0.25, abs=1e-10)


def test_identical_densities_give_empty_set():
    assert len(oscillations.exceedance_intervals((C, 3.0), (C, 3.0))) == 0
    assert oscillations.oscillation_count(G0, G0) == 0


def test_two_periods_give_three_intervals():
    assert oscillations.oscillation_count((C, 4 * math.pi), G0) == 3


@pytest.mark.parametrize("j", range(1, 6))
def test_count_is_j_plus_one(j):
    assert oscillations.oscillation_count((C, 2 * math.pi * j), G0) == j + 1


def test_gauss_mixture_counts_against_dense_sign_changes():
    rng = np.random.default_rng(6)
    x = None
    for _ in range(100):
        def draw():
            w = rng.dirichlet(np.ones(3))
            return model.FamilySpec.gauss_mixture(tuple(w), tuple(rng.uniform(-2, 2, 3)),
                                                  tuple(rng.uniform(0.5, 4, 3)))
        f, g = (draw(), float(rng.uniform(0, 1))), (draw(), float(rng.uniform(0, 1)))
        count = oscillations.oscillation_count(f, g)
        s = oscillations.exceedance_intervals(f, g)
        lo, hi = s.domain
        x = np.linspace(lo, hi, 10**6)
        pos = (model.pdf(*f, x) - model.pdf(*g, x)) > 0
        runs = int(np.sum(np.diff(pos.astype(int)) == 1) + pos[0])
        assert count <= 6
        assert count == runs


def test_minimality_and_root_bracketing():
    f = (C, 2 * math.pi * 7 + 1.3)
    s = oscillations.exceedance_intervals(f, G0)
    x = np.linspace(0, 1, 10**4)
    assert np.array_equal(s.contains(x), model.pdf(*f, x) > 1.0)
    diff = lambda t: model.pdf(*f, t) - 1.0  # noqa: E731
    for a, b in s.intervals:
        for e in (a, b):
            if 0 < e < 1:
                assert diff(e - 1e-8) * diff(e + 1e-8) < 0
    for (_, b0), (a1, _) in zip(s.intervals, s.intervals[1:]):
        assert b0 < a1


def test_interval_set_validation():
    with pytest.raises(ValueError):
        IntervalSet(((0.2, 0.1),))
    with pytest.raises(ValueError):
        IntervalSet(((0.0, 0.5), (0.4, 0.6)))
    assert IntervalSet(((0.0, 0.25), (0.75, 1.0))).measure == 0.5


def test_check_holds_along_the_sequence():
    reports = oscillations.check_oscillation_bound([2 * math.pi * j for j in range(1, 21)], G0, 0.30)
    assert all(r.inequality_holds for r in reports)
    counts = [r.count for r in reports]
    assert all(b > a for a, b in zip(counts, counts[1:]))


def test_check_with_reference_itself_is_trivial():
    (r,) = oscillations.check_oscillation_bound([0.0], G0)
    assert (r.count, r.tv_epsilon, r.lp_delta) == (0, 0.0, 0.0)
    assert r.inequality_holds


def test_constant_sequence_gives_constant_reports():
    reports = oscillations.check_oscillation_bound([2 * math.pi] * 3, G0)
    assert {r.count for r in reports} == {2}
    assert len({r.lp_delta for r in reports}) == 1
    assert all(r.inequality_holds for r in reports)


def test_modulus_equals_delta_for_uniform_reference():
    (r,) = oscillations.check_oscillation_bound([2 * math.pi * 3], G0)
    assert r.modulus == pytest.approx(r.lp_delta, abs=1e-12)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        oscillations.check_oscillation_bound([], G0)
    with pytest.raises(ValueError):
        oscillations.check_oscillation_bound([1.0], G0, eps=0.0)
