import math

import numpy as np
import pytest

from oscbayes._errors import NumericalError, ValidationError
from oscbayes.quadrature import QuadratureConfig, initial_edges, integrate


def test_gauss_kronrod_is_exact_for_high_degree_polynomials():
    res = integrate(lambda x: x**13, 0.0, 1.0)
    assert res.value == pytest.approx(1 / 14, abs=1e-15)


def test_oscillatory_integrand():
    w = 2000.0
    res = integrate(lambda x: np.cos(w * x) ** 2, 0.0, 1.0, freq=2 * w)
    exact = 0.5 + math.sin(2 * w) / (4 * w)
    assert res.value == pytest.approx(exact, abs=1e-11)


def test_sqrt_kink_handled_by_breakpoint():
    res = integrate(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, breakpoints=[0.3])
    exact = (2 / 3) * (0.3**1.5 + 0.7**1.5)
    assert res.value == pytest.approx(exact, abs=1e-11)


def test_initial_edges_respect_width_and_breakpoints():
    e = initial_edges(0.0, 1.0, 0.07, [0.5, 0.123])
    assert np.all(np.diff(e) <= 0.07 + 1e-15)
    assert 0.5 in e and 0.123 in e


def test_config_validation():
    with pytest.raises(ValidationError):
        QuadratureConfig(oscillation_guard=3)
    with pytest.raises(ValidationError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ValidationError):
        QuadratureConfig(max_panels=1)


def test_panel_budget_exceeded_raises_with_diagnostics():
    cfg = QuadratureConfig(max_panels=4, abs_tol=1e-15, rel_tol=1e-15)
    with pytest.raises(NumericalError) as info:
        integrate(lambda x: np.sin(1 / np.maximum(x, 1e-3)), 0.0, 1.0, cfg)
    assert "panels" in info.value.diagnostics


def test_result_is_deterministic():
    f = lambda x: np.exp(-x) * np.cos(50 * x)  # noqa: E731
    assert integrate(f, 0, 3, freq=50).value == integrate(f, 0, 3, freq=50).value
