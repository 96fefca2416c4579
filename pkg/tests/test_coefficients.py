"""Coefficient builders, class budgets, and the weight change of variable."""

import numpy as np
import pytest

from fracheatlab.spectral import GridSpec
from fracheatlab.coefficients import (
    ClassA1,
    ClassA2,
    CoefficientField,
    BUILTIN_COEFFICIENTS,
    builtin_coefficient,
    verify_class,
    weight_transform,
    h_s_derivative_check,
)


def test_budget_values():
    a1 = ClassA1(C=2.0, R=0.5)
    assert a1.derivative_bound((3,)) == pytest.approx(2.0 * 6 / 0.5**3)
    assert a1.derivative_bound((1, 2)) == pytest.approx(2.0 * 2 / 0.5**3)
    a2 = ClassA2(C=1.5, M=3.0, kappa=0.5)
    assert a2.derivative_bound((2,)) == pytest.approx(1.5 * 9.0 * np.sqrt(2.0))
    with pytest.raises(ValueError):
        ClassA1(C=1.0, R=0.0)
    with pytest.raises(ValueError):
        ClassA2(C=1.0, M=1.0, kappa=1.0)


def test_entire_budget_embeds_as_analytic():
    a2 = ClassA2(C=0.7, M=4.0, kappa=0.0)
    a1 = a2.as_a1()
    assert a1.C == 0.7
    assert a1.R == pytest.approx(0.25)
    # the embedded budget dominates order by order (equality at kappa = 0
    # happens only at order <= 1)
    for m in range(6):
        assert a2.derivative_bound((m,)) <= a1.derivative_bound((m,)) + 1e-15
    with pytest.raises(ValueError):
        ClassA2(C=1.0, M=1.0, kappa=0.5).as_a1()


def test_builtin_registry_and_validation():
    g = GridSpec(1, 32, 2 * np.pi)
    assert set(BUILTIN_COEFFICIENTS) == {
        "zero", "constant", "cosine", "time_cosine", "fourier_decay",
    }
    with pytest.raises(ValueError):
        builtin_coefficient("nope", g)
    with pytest.raises(ValueError):
        builtin_coefficient("cosine", g, mode=0)
    a = builtin_coefficient("constant", g, value=-2.5)
    assert np.all(a.sample(0.0) == -2.5)
    assert a.class_info.C == 2.5


def test_cosine_samples_and_class():
    g = GridSpec(1, 64, 2 * np.pi)
    a = builtin_coefficient("cosine", g, amplitude=0.5, mode=2)
    x = g.x_axes[0]
    assert np.allclose(a.sample(0.0), 0.5 * np.cos(2 * x))
    assert np.allclose(a.sample(7.3), a.sample(0.0))  # autonomous
    rep = verify_class(a, alpha_max=10)
    assert rep.passed, f"worst ratio {rep.worst_ratio} at {rep.worst_alpha}"


def test_time_cosine_travels_and_keeps_class():
    g = GridSpec(1, 64, 2 * np.pi)
    a = builtin_coefficient("time_cosine", g, amplitude=0.3, mode=1, time_freq=2.0)
    x = g.x_axes[0]
    assert np.allclose(a.sample(0.5), 0.3 * np.cos(x - 1.0))
    rep = verify_class(a, alpha_max=8, t_grid=(0.0, 0.4, 1.1))
    assert rep.passed


def test_fourier_decay_fitted_class():
    """The builder fits its own prefactor on low orders; the declared budget
    must then survive an independent re-measurement, including in 2D."""
    g = GridSpec(1, 128, 2 * np.pi)
    a = builtin_coefficient("fourier_decay", g, radius=1.0, seed=3)
    assert a.class_info.R == pytest.approx(0.5)
    rep = verify_class(a, alpha_max=12)
    assert rep.passed, f"worst ratio {rep.worst_ratio} at alpha {rep.worst_alpha}"
    # samples are real and deterministic for a fixed seed
    b = builtin_coefficient("fourier_decay", g, radius=1.0, seed=3)
    assert np.array_equal(a.sample(0.0), b.sample(0.0))
    assert not np.array_equal(
        a.sample(0.0),
        builtin_coefficient("fourier_decay", g, radius=1.0, seed=4).sample(0.0),
    )
    g2 = GridSpec(2, 32, 2 * np.pi)
    a2 = builtin_coefficient("fourier_decay", g2, radius=1.5, seed=4)
    assert verify_class(a2, alpha_max=8).passed


def test_verify_class_flags_a_lying_budget():
    g = GridSpec(1, 64, 2 * np.pi)
    x = g.x_axes[0]
    samples = np.cos(4 * x)
    liar = CoefficientField(
        g, lambda t: samples, ClassA1(C=1.0, R=2.0), "liar"
    )
    # first derivative already has sup 4 > C/R = 0.5, and the shortfall
    # widens with the order
    rep = verify_class(liar, alpha_max=4)
    assert not rep.passed
    assert sum(rep.worst_alpha) >= 1
    assert rep.worst_ratio > 8.0
    honest = CoefficientField(g, lambda t: samples, ClassA2(C=1.0, M=4.0, kappa=0.0))
    assert verify_class(honest, alpha_max=6).passed


def test_verify_class_zero_budget():
    g = GridSpec(1, 32, 2 * np.pi)
    a = builtin_coefficient("zero", g)
    assert verify_class(a, alpha_max=6).passed
    with pytest.raises(ValueError):
        verify_class(CoefficientField(g, lambda t: np.zeros(32)))


def test_verify_class_tolerates_nyquist_noise():
    """Differentiating 0.5*cos(x) twelve times on a fine grid produces
    rounding noise amplified by nyquist^12; the exact budget must still
    pass thanks to the absolute allowance."""
    g = GridSpec(1, 256, 2 * np.pi)
    a = builtin_coefficient("cosine", g, amplitude=0.5, mode=1)
    rep = verify_class(a, alpha_max=12)
    assert rep.passed, f"worst ratio {rep.worst_ratio} at alpha {rep.worst_alpha}"


def test_weight_transform_closed_forms():
    g = GridSpec(1, 64, 8.0)
    xc = g.x_centered_axes[0]
    pair = weight_transform(1.0, g)
    # the zero-order part w*(w-1)*(1+x^2)^(-1/2) vanishes at w = 1
    assert np.max(np.abs(pair.zero_order)) == 0.0
    assert np.allclose(pair.drift[0], 2.0 * xc / (1.0 + xc**2))
    off = weight_transform(0.0, g)
    assert np.max(np.abs(off.zero_order)) == 0.0
    assert np.max(np.abs(off.drift[0])) == 0.0
    pair2 = weight_transform(2.5, g)
    assert np.allclose(pair2.zero_order, 2.5 * 1.5 / np.sqrt(1.0 + xc**2))
    # both pieces are bounded uniformly in the period: |x|/(1+x^2) <= 1/2
    assert np.max(np.abs(pair2.drift[0])) <= 2.0 * 2.5 * 0.5 + 1e-15
    g2 = GridSpec(2, 32, 8.0)
    pair3 = weight_transform(1.5, g2)
    assert pair3.zero_order.shape == (32, 32)
    assert len(pair3.drift) == 2


@pytest.mark.parametrize("s", [1.0, 2.0])
def test_reciprocal_weight_derivative_growth(s):
    rep = h_s_derivative_check(s, alpha_max=8)
    # sup|h| = 1 at order zero and the budget base 12 swamps the measured
    # growth, so the fitted prefactor is the order-zero value exactly
    assert rep.prefactor == pytest.approx(1.0, rel=1e-9)
    assert rep.boundary_value <= 2.5001e-3
    assert rep.derivative_sups[0] == pytest.approx(1.0, rel=1e-12)
    assert np.all(np.isfinite(rep.derivative_sups))
    # fitting against a smaller base raises the prefactor
    assert rep.prefactor_for_base(1.0) >= rep.prefactor


def test_h_s_check_widens_torus_for_slow_decay():
    slow = h_s_derivative_check(0.5, alpha_max=2)
    fast = h_s_derivative_check(3.0, alpha_max=2)
    assert slow.period > fast.period
    assert slow.boundary_value <= 2.5001e-3
    with pytest.raises(ValueError):
        h_s_derivative_check(0.0)
