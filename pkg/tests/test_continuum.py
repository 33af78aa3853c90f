import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclap import continuum
from fraclap.continuum import KernelSpec
from fraclap.errors import AlignmentError, ConvergenceError, DomainError


def riesz_const(alpha):
    return math.gamma(alpha + 1) / math.pi * math.sin(math.pi * alpha / 2)


def mp_periodic(alpha, length, x):
    # direct image sum at high precision
    mp.mp.dps = 30
    b = mp.mpf(alpha) + 1
    xi = mp.mpf(x) / length
    s = mp.zeta(b, xi) + mp.zeta(b, 1 - xi)
    return float(riesz_const(alpha) / mp.mpf(length) ** b * s)


# -- specs / scaling -----------------------------------------------------------


@pytest.mark.parametrize("kw", [dict(length=0.0), dict(length=-1.0), dict(rho0=0.0), dict(A_alpha=-2.0), dict(eps=-1e-3)])
def test_kernelspec_rejects(kw):
    with pytest.raises(DomainError):
        KernelSpec(1.0, **kw)


def test_scaling_constants():
    assert continuum.scaling_constants(1.0, 1.3) == (1.0, 1.0)
    assert continuum.scaling_constants(0.5, 2.0) == (0.5, 4.0)
    assert continuum.scaling_constants(0.25, 1.0, rho0=2.0, A_alpha=3.0) == (0.5, 12.0)
    with pytest.raises(DomainError):
        continuum.scaling_constants(0.0, 1.0)


# -- infinite line -------------------------------------------------------------


def test_riesz_infinite_examples():
    assert continuum.riesz_kernel_infinite(1.0, 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert continuum.riesz_kernel_infinite(2.0, 0.7) == 0.0
    ref = math.gamma(1.5) / math.pi * math.sin(math.pi / 4) * 2**-1.5
    assert continuum.riesz_kernel_infinite(0.5, 2.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(0.0705237, abs=1e-7)
    with pytest.raises(DomainError):
        continuum.riesz_kernel_infinite(1.0, 0.0)


def test_riesz_infinite_matches_regularized_limit():
    # eps-extrapolated regularized kernel reproduces the pointwise value
    vals = [continuum.riesz_kernel_regularized(0.5, 2.0, e) for e in continuum.DEFAULT_EPS_LADDER]
    assert continuum.richardson(vals) == pytest.approx(continuum.riesz_kernel_infinite(0.5, 2.0), rel=1e-9)


def test_regularized_examples():
    eps = 1e-2
    assert continuum.riesz_kernel_regularized(1.0, 0.0, eps) == pytest.approx(-1 / (math.pi * eps**2), rel=1e-14)
    assert continuum.riesz_kernel_regularized(1.0, 1.0, 1e-6) == pytest.approx(1 / math.pi, rel=1e-5)
    with pytest.raises(DomainError):
        continuum.riesz_kernel_regularized(1.0, 0.5, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(-5.0, 5.0), st.floats(1e-3, 1.0))
def test_regularized_matches_complex_arithmetic(alpha, x, eps):
    b = alpha + 1
    ref = -math.gamma(b) / math.pi * (1j**b / complex(x, eps) ** b).real
    got = continuum.riesz_kernel_regularized(alpha, x, eps)
    scale = math.gamma(b) / math.pi * abs(complex(x, eps)) ** -b
    assert got == pytest.approx(ref, abs=1e-12 * scale)
    assert continuum.riesz_kernel_regularized(alpha, -x, eps) == pytest.approx(got, abs=1e-12 * scale)


def test_regularized_vectorized():
    x = np.linspace(-1, 1, 7)
    out = continuum.riesz_kernel_regularized(1.5, x, 0.1)
    assert out.shape == (7,)
    assert out[3] == pytest.approx(continuum.riesz_kernel_regularized(1.5, 0.0, 0.1))


# -- periodic kernel -----------------------------------------------------------


def test_periodic_closed_value():
    spec = KernelSpec(1.0, 1.0)
    assert continuum.periodic_kernel_zeta(spec, 0.5) == pytest.approx(math.pi, rel=1e-8)
    assert continuum.periodic_kernel_imagesum(spec, 0.5, tol=1e-10) == pytest.approx(math.pi, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.5, 3.7])
def test_zeta_imagesum_duality(alpha):
    spec = KernelSpec(alpha, 1.0)
    for xi in np.linspace(0.1, 0.9, 9):
        a = continuum.periodic_kernel_zeta(spec, xi)
        b = continuum.periodic_kernel_imagesum(spec, xi)
        assert abs(a - b) <= max(1e-8 * abs(a), 1e-12)


@pytest.mark.parametrize(("alpha", "length", "x"), [(0.5, 1.0, 0.3), (1.5, 2.0, 0.2), (3.7, 0.5, 0.4), (1.0, 3.0, 1.0)])
def test_periodic_against_mpmath(alpha, length, x):
    ref = mp_periodic(alpha, length, x)
    assert continuum.periodic_kernel_zeta(KernelSpec(alpha, length), x) == pytest.approx(ref, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.2, 3.8), st.floats(0.01, 0.99), st.integers(-3, 3))
def test_periodicity_and_reflection(alpha, xi, n):
    length = 2.0
    spec = KernelSpec(alpha, length)
    x = xi * length
    base = continuum.periodic_kernel_zeta(spec, x)
    for other in (x + n * length, length - x, -x):
        if other == 0.0 or abs(math.remainder(other, length)) < 1e-9:
            continue
        assert continuum.periodic_kernel_zeta(spec, other) == pytest.approx(base, rel=1e-12, abs=1e-300)


def test_periodic_integer_vanishes():
    for alpha in (2.0, 4.0):
        assert continuum.periodic_kernel_zeta(KernelSpec(alpha, 1.0), 0.3) == 0.0
        assert continuum.periodic_kernel_imagesum(KernelSpec(alpha, 1.0), 0.3) == 0.0


@pytest.mark.parametrize("x", [0.0, 1.0, -2.0, 3.0])
def test_periodic_lattice_points_rejected(x):
    with pytest.raises(DomainError):
        continuum.periodic_kernel_zeta(KernelSpec(1.0, 1.0), x)
    with pytest.raises(DomainError):
        continuum.periodic_kernel_imagesum(KernelSpec(1.0, 1.0), x)


def test_periodic_needs_length():
    with pytest.raises(DomainError):
        continuum.periodic_kernel_zeta(KernelSpec(1.0), 0.5)


def test_nearest_image_dominates():
    spec = KernelSpec(1.5, 1.0)
    x = 1e-3
    assert continuum.periodic_kernel_zeta(spec, x) == pytest.approx(continuum.riesz_kernel_infinite(1.5, x), rel=1e-6)


def test_large_length_recovers_infinite():
    inf = continuum.riesz_kernel_infinite(1.0, 1.0)
    gaps = [abs(continuum.periodic_kernel_zeta(KernelSpec(1.0, L), 1.0) - inf) for L in (4.0, 16.0, 64.0)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_pointwise_deficit_slope(alpha):
    # image deficit at fixed x: sum_{n != 0} |x - nL|^-(alpha+1) ~ L^-(alpha+1)
    lengths = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    inf = continuum.riesz_kernel_infinite(alpha, 0.5)
    d = [abs(continuum.periodic_kernel_zeta(KernelSpec(alpha, L), 0.5) - inf) for L in lengths]
    slope = np.polyfit(np.log(lengths), np.log(d), 1)[0]
    assert slope == pytest.approx(-(alpha + 1), abs=0.2)
    assert np.all(np.diff(d) < 0)


def test_imagesum_budget():
    with pytest.raises(ConvergenceError):
        continuum.periodic_kernel_imagesum(KernelSpec(0.5, 1.0), 0.5, tol=1e-16, budget=100)


# -- regularized periodic kernel -----------------------------------------------


def test_periodic_regularized_examples():
    spec = KernelSpec(1.0, 1.0, eps=1e-6)
    assert continuum.periodic_kernel_regularized(spec, 0.5) == pytest.approx(math.pi, rel=1e-4)
    at0 = continuum.periodic_kernel_regularized(KernelSpec(1.0, 1.0, eps=1e-2), 0.0)
    assert np.isfinite(at0)
    with pytest.raises(DomainError):
        continuum.periodic_kernel_regularized(KernelSpec(1.0, 1.0), 0.5)


@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0, 3.7])
def test_periodic_regularized_even_and_periodic(alpha):
    spec = KernelSpec(alpha, 1.0, eps=1e-2)
    x = np.array([0.0, 0.013, 0.2, 0.37, 0.5])
    a = continuum.periodic_kernel_regularized(spec, x)
    assert continuum.periodic_kernel_regularized(spec, -x) == pytest.approx(a, rel=1e-11)
    assert continuum.periodic_kernel_regularized(spec, x + 3.0) == pytest.approx(a, rel=1e-9)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
def test_periodic_regularized_tends_to_zeta(alpha):
    x = 0.3
    ref = continuum.periodic_kernel_zeta(KernelSpec(alpha, 1.0), x)
    errs = [abs(continuum.periodic_kernel_regularized(KernelSpec(alpha, 1.0, eps=e), x) - ref) for e in (1e-2, 1e-3, 1e-4)]
    # pointwise error is O(eps) (O(eps^2) when cos(alpha pi/2) = 0)
    assert errs[1] <= 0.15 * errs[0] and errs[2] <= 0.15 * errs[1]
    vals = [continuum.periodic_kernel_regularized(KernelSpec(alpha, 1.0, eps=e), x) for e in continuum.DEFAULT_EPS_LADDER]
    assert continuum.richardson(vals) == pytest.approx(ref, rel=1e-6)


# -- spectral law --------------------------------------------------------------


def test_periodic_eigenvalue_examples():
    assert continuum.periodic_eigenvalue(1.0, 1.0, 1) == pytest.approx(-2 * math.pi, rel=1e-15)
    assert continuum.periodic_eigenvalue(1.7, 1.0, 0) == 0.0
    assert continuum.periodic_eigenvalue(2.0, 2 * math.pi, 3) == pytest.approx(-9.0, rel=1e-14)
    assert continuum.periodic_eigenvalue(1.5, 1.0, -2) == continuum.periodic_eigenvalue(1.5, 1.0, 2)


def test_convolution_exact_at_fixed_eps():
    # at finite eps the regularized convolution equals -|k|^alpha exp(-eps |k|)
    spec = KernelSpec(1.5, 1.0, eps=5e-3)
    k = 2 * math.pi
    got = continuum.verify_eigen_by_convolution(spec, 1, quad_tol=1e-8)
    assert got == pytest.approx(-(k**1.5) * math.exp(-5e-3 * k), rel=1e-6)


@pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_spectral_law(alpha, l):
    got = continuum.extrapolated_eigenvalue(alpha, 1.0, l)
    ref = continuum.periodic_eigenvalue(alpha, 1.0, l)
    if l == 0:
        assert abs(got) <= 1e-6
    else:
        assert got == pytest.approx(ref, rel=0.01)


def test_spectral_examples():
    assert continuum.extrapolated_eigenvalue(1.0, 1.0, 1, eps_ladder=(1e-2, 5e-3, 2.5e-3)) == pytest.approx(-2 * math.pi, rel=1e-3)
    assert continuum.extrapolated_eigenvalue(2.0, 1.0, 2) == pytest.approx(-16 * math.pi**2, rel=1e-3)


def test_constant_annihilation():
    for alpha in (1.0, 1.5, 2.0):
        quad_tol = 1e-6
        v = continuum.verify_eigen_by_convolution(KernelSpec(alpha, 1.0, eps=1e-2), 0, quad_tol)
        assert abs(v) <= quad_tol


def test_eps_ladder_must_halve():
    with pytest.raises(DomainError):
        continuum.extrapolated_eigenvalue(1.0, 1.0, 1, eps_ladder=(1e-2, 3e-3))


def test_richardson_on_polynomial():
    f = lambda e: 3.0 + 2.0 * e - 5.0 * e**2 + e**3
    assert continuum.richardson([f(0.1 / 2**j) for j in range(4)]) == pytest.approx(3.0, abs=1e-13)


def test_convolution_needs_eps():
    with pytest.raises(DomainError):
        continuum.verify_eigen_by_convolution(KernelSpec(1.0, 1.0), 1)


# -- integer order / zero string -----------------------------------------------


def test_integer_order_examples():
    eps = 1e-2
    rep = continuum.integer_order_check(0, None, eps, x=[0.0])
    assert rep.kernel[0] == pytest.approx(-1 / (math.pi * eps), rel=1e-14)
    assert rep.oracle[0] == pytest.approx(-1 / (math.pi * eps), rel=1e-14)


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("length", [None, 1.0])
def test_integer_order_matches_lorentzian(m, length):
    rep = continuum.integer_order_check(m, length, 1e-2)
    assert np.all(np.abs(rep.kernel - rep.oracle) <= 1e-8 * np.abs(rep.oracle) + 1e-8 * np.max(np.abs(rep.oracle)))


def test_integer_order_bloch_law():
    got = continuum.extrapolated_eigenvalue(2.0, 1.0, 1)
    assert got == pytest.approx(-4 * math.pi**2, rel=1e-3)


@pytest.mark.parametrize("alpha", [1.0, 2.0, 0.5])
def test_zero_string(alpha):
    a = abs(continuum.zero_string_limit_check(alpha, 1e-3, 10.0))
    b = abs(continuum.zero_string_limit_check(alpha, 5e-4, 10.0))
    peak = abs(continuum.riesz_kernel_regularized(alpha, 0.0, 1e-3))
    assert a <= 1e-3 * peak * 1e-3
    assert b <= a * (1 + 1e-6) + 1e-12


def test_zero_string_domain():
    with pytest.raises(DomainError):
        continuum.zero_string_limit_check(1.0, 0.0, 10.0)
    with pytest.raises(DomainError):
        continuum.zero_string_limit_check(1.0, 1.0, 0.5)


# -- continuum limit -----------------------------------------------------------


def test_convergence_study_alpha1():
    hs = [2.0**-k for k in range(3, 9)]
    rep = continuum.convergence_study(1.0, 1.0, 1.0, 1.0, 0.5, hs)
    assert rep.rows[0].continuum == pytest.approx(math.pi, rel=1e-12)
    assert rep.monotone
    assert rep.errors[-1] <= 0.1 * rep.errors[0]
    for r in rep.rows:
        assert r.n * r.h == pytest.approx(1.0, rel=1e-15)
    assert rep.fitted_order > 1.0


def test_convergence_study_scaling_prefactor():
    hs = [2.0**-k for k in range(3, 7)]
    base = continuum.convergence_study(1.5, 1.0, 1.0, 1.0, 0.25, hs)
    scaled = continuum.convergence_study(1.5, 1.0, 2.0, 3.0, 0.25, hs)
    for a, b in zip(base.rows, scaled.rows):
        assert b.discrete == pytest.approx(6.0 * a.discrete, rel=1e-12)
        assert b.continuum == pytest.approx(6.0 * a.continuum, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.5, 2.5])
def test_convergence_error_shrinks(alpha):
    rep = continuum.convergence_study(alpha, 1.0, 1.0, 1.0, 0.5, [2.0**-k for k in range(3, 8)])
    assert rep.errors[-1] < rep.errors[0]


def test_convergence_integer_vanishes():
    rep = continuum.convergence_study(2.0, 1.0, 1.0, 1.0, 0.5, [2.0**-k for k in range(3, 7)])
    assert all(abs(r.discrete) <= 1e-9 for r in rep.rows)
    assert all(r.continuum == 0.0 for r in rep.rows)


def test_convergence_alignment():
    with pytest.raises(AlignmentError):
        continuum.convergence_study(1.0, 1.0, 1.0, 1.0, 0.3, [0.25, 0.125])
    with pytest.raises(DomainError):
        continuum.convergence_study(1.0, 1.0, 1.0, 1.0, 0.5, [0.125, 0.25])
