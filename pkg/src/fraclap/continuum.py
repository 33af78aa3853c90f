"""Continuum-limit Riesz kernels on the infinite line and the L-periodic string.

Kernels are computed without the physical prefactor rho0*A_alpha; callers
multiply it in (see ``convergence_study``).  The periodic kernel is reduced
to the principal interval before evaluation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .chain import ChainSpec, element_periodic_spectral
from .errors import AlignmentError, ConvergenceError, DomainError
from .specfun import FracOrder, as_order, hurwitz_zeta, hurwitz_zeta_abs

SINGULAR_TOL = 1e-12
DEFAULT_EPS_LADDER = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


@dataclass(frozen=True)
class KernelSpec:
    """Continuum kernel parameters; ``length=None`` selects the infinite line."""

    order: FracOrder
    length: float | None = None
    rho0: float = 1.0
    A_alpha: float = 1.0
    eps: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", as_order(self.order))
        if self.length is not None and not self.length > 0:
            raise DomainError(f"string length must be positive, got {self.length!r}")
        if not self.rho0 > 0 or not self.A_alpha > 0:
            raise DomainError("rho0 and A_alpha must be positive")
        if not self.eps >= 0:
            raise DomainError(f"eps must be >= 0, got {self.eps!r}")

    @property
    def is_periodic(self) -> bool:
        return self.length is not None

    @property
    def prefactor(self) -> float:
        return self.rho0 * self.A_alpha


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    n: int
    x: float
    discrete: float
    continuum: float
    abs_error: float


@dataclass(frozen=True)
class ConvergenceReport:
    alpha: float
    length: float
    rows: tuple[ConvergenceRow, ...]
    fitted_order: float = field(default=math.nan)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.abs_error for r in self.rows])

    @property
    def monotone(self) -> bool:
        e = self.errors
        return bool(np.all(np.diff(e) < 0))


@dataclass(frozen=True)
class IntegerOrderReport:
    m: int
    length: float | None
    eps: float
    x: np.ndarray
    kernel: np.ndarray
    oracle: np.ndarray

    @property
    def max_rel_error(self) -> float:
        scale = float(np.max(np.abs(self.oracle)))
        return float(np.max(np.abs(self.kernel - self.oracle))) / scale


def _riesz_constant(order: FracOrder) -> float:
    # (alpha!/pi) sin(alpha pi/2)
    return math.gamma(order.alpha + 1.0) / math.pi * order.sin_factor()


def scaling_constants(h: float, order, rho0: float = 1.0, A_alpha: float = 1.0) -> tuple[float, float]:
    """Particle mass and Omega^2 for lattice constant h: (rho0 h, A_alpha h^-alpha)."""
    order = as_order(order)
    if not h > 0:
        raise DomainError(f"h must be positive, got {h!r}")
    return rho0 * h, A_alpha * h**-order.alpha


def riesz_kernel_infinite(order, x: float) -> float:
    """Hypersingular kernel (alpha!/pi) sin(alpha pi/2) |x|^(-alpha-1), x != 0."""
    order = as_order(order)
    if x == 0:
        raise DomainError("the infinite-line kernel is hypersingular at x = 0")
    return _riesz_constant(order) * abs(x) ** (-order.alpha - 1.0)


def _regularized(alpha: float, y, eps: float):
    # -(alpha!/pi) Re{ i^(alpha+1) / (y + i eps)^(alpha+1) } in polar form
    beta = alpha + 1.0
    y = np.asarray(y, dtype=float)
    r = np.hypot(y, eps)
    theta = np.arctan2(eps, y)
    return -math.gamma(beta) / math.pi * r**-beta * np.cos(0.5 * math.pi * beta - beta * theta)


def riesz_kernel_regularized(order, x, eps: float):
    """epsilon-regularized infinite-line kernel; finite at x = 0."""
    order = as_order(order)
    if not eps > 0:
        raise DomainError("eps must be positive")
    out = _regularized(order.alpha, x, eps)
    return float(out) if np.ndim(out) == 0 else out


def _principal(x: float, length: float) -> float:
    xi = math.fmod(x / length, 1.0)
    if xi < 0:
        xi += 1.0
    return xi


def _require_periodic(spec: KernelSpec) -> float:
    if spec.length is None:
        raise DomainError("operation needs a periodic string (length is None)")
    return spec.length


def _check_off_lattice(xi: float) -> None:
    if xi < SINGULAR_TOL or xi > 1.0 - SINGULAR_TOL:
        raise DomainError("the periodic kernel is hypersingular at lattice points x = nL")


def periodic_kernel_zeta(spec: KernelSpec, x: float) -> float:
    """L-periodic kernel through the absolute-value Hurwitz zeta closed form."""
    length = _require_periodic(spec)
    order = spec.order
    xi = _principal(x, length)
    _check_off_lattice(xi)
    c = _riesz_constant(order)
    if c == 0.0:
        return 0.0
    beta = order.alpha + 1.0
    bracket = -(xi**-beta) + hurwitz_zeta_abs(beta, xi) + hurwitz_zeta_abs(beta, -xi)
    return c / length**beta * bracket


def _one_sided_images(beta: float, y: float, tol: float, budget: int) -> tuple[float, float]:
    # sum_{n>=0} (n + y)^-beta: direct head, integral tail with two end corrections
    m = 64
    while True:
        if m > budget:
            raise ConvergenceError(f"image sum needs more than {budget} direct terms")
        head = np.sum(((np.arange(m, dtype=float) + y) ** -beta)[::-1])
        b = m + y
        tail = (
            b ** (1.0 - beta) / (beta - 1.0)
            + 0.5 * b**-beta
            + beta / 12.0 * b ** (-beta - 1.0)
            - beta * (beta + 1.0) * (beta + 2.0) / 720.0 * b ** (-beta - 3.0)
        )
        err = beta * (beta + 1.0) * (beta + 2.0) * (beta + 3.0) * (beta + 4.0) / 30240.0 * b ** (-beta - 5.0)
        if err <= tol:
            return float(head) + tail, err
        m *= 4


def periodic_kernel_imagesum(spec: KernelSpec, x: float, tol: float = 1e-12, budget: int = 10**7) -> float:
    """L-periodic kernel as the image sum sum_n g_inf(|x - nL|)."""
    length = _require_periodic(spec)
    order = spec.order
    xi = _principal(x, length)
    _check_off_lattice(xi)
    c = _riesz_constant(order)
    if c == 0.0:
        return 0.0
    beta = order.alpha + 1.0
    scale = abs(c) / length**beta
    right, e1 = _one_sided_images(beta, xi, 0.25 * tol / scale, budget)
    left, e2 = _one_sided_images(beta, 1.0 - xi, 0.25 * tol / scale, budget)
    return c / length**beta * (right + left)


def _periodic_regularized_raw(alpha: float, length: float, x, eps: float, n_max: int):
    x = np.asarray(x, dtype=float)
    n = np.arange(-n_max, n_max + 1, dtype=float)
    y = x[..., None] - n * length
    near = np.sum(_regularized(alpha, y, eps), axis=-1)
    if alpha == 0.0 or FracOrder(alpha).is_integer_half:
        return near
    # far images: regularization is negligible there, use the hypersingular sum
    beta = alpha + 1.0
    c = _riesz_constant(FracOrder(alpha))
    xi = x / length
    far = np.vectorize(lambda s: hurwitz_zeta(beta, n_max + 1 - s) + hurwitz_zeta(beta, n_max + 1 + s))(xi)
    return near + c / length**beta * far


def periodic_kernel_regularized(spec: KernelSpec, x, n_max: int = 64):
    """epsilon-regularized L-periodic kernel, finite at every x.

    Images |n| <= n_max are summed in regularized form; farther images use the
    hypersingular series, which the regularization changes only at O(eps^2).
    """
    length = _require_periodic(spec)
    if not spec.eps > 0:
        raise DomainError("periodic_kernel_regularized needs eps > 0")
    x = np.asarray(x, dtype=float)
    # reduce to [-L/2, L/2) so the direct images straddle x symmetrically
    xr = x - length * np.floor(x / length + 0.5)
    out = _periodic_regularized_raw(spec.order.alpha, length, xr, spec.eps, n_max)
    return float(out) if np.ndim(out) == 0 else out


def periodic_eigenvalue(order, length: float, l: int) -> float:
    """Eigenvalue -|2 pi l / L|^alpha of the periodic fractional Laplacian."""
    order = as_order(order)
    if not length > 0:
        raise DomainError("length must be positive")
    if l == 0:
        return 0.0
    return -abs(2.0 * math.pi * l / length) ** order.alpha


def _panels(eps: float, upper: float) -> list[float]:
    pts = [0.0]
    b = eps
    while b < upper:
        pts.append(b)
        b *= 2.0
    pts.append(upper)
    return pts


def verify_eigen_by_convolution(spec: KernelSpec, l: int, quad_tol: float = 1e-6, n_max: int = 64) -> float:
    """Convolve the regularized periodic kernel with Bloch mode l over one period.

    Returns the measured eigenvalue int_0^L K(y) cos(k_l y) dy at ``spec.eps``.
    """
    length = _require_periodic(spec)
    if not spec.eps > 0:
        raise DomainError("verify_eigen_by_convolution needs eps > 0")
    if not quad_tol > 0:
        raise DomainError("quad_tol must be positive")
    k = 2.0 * math.pi * l / length
    eps = spec.eps
    alpha = spec.order.alpha

    def integrand(y):
        return float(_periodic_regularized_raw(alpha, length, y, eps, n_max)) * math.cos(k * y)

    pts = _panels(eps, 0.5 * length)
    share = quad_tol / (4.0 * len(pts))
    total, err_total = [], 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for a, b in zip(pts[:-1], pts[1:]):
            val, err = quad(integrand, a, b, epsabs=share, epsrel=1e-13, limit=200)
            total.append(val)
            err_total += err
    if err_total > 0.5 * quad_tol:
        raise ConvergenceError(f"convolution quadrature error {err_total:.3g} exceeds {quad_tol:.3g}")
    return 2.0 * math.fsum(total)


def richardson(values, ratio: float = 2.0) -> float:
    """Extrapolate values on a geometric eps ladder to eps -> 0, assuming a power series in eps."""
    table = [list(map(float, values))]
    for j in range(1, len(values)):
        prev = table[-1]
        fac = ratio**j
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    return table[-1][0]


def extrapolated_eigenvalue(order, length: float, l: int, eps_ladder=DEFAULT_EPS_LADDER, quad_tol: float = 1e-6) -> float:
    """Richardson-extrapolated convolution eigenvalue over a halving eps ladder."""
    order = as_order(order)
    ladder = list(eps_ladder)
    for a, b in zip(ladder[:-1], ladder[1:]):
        if not math.isclose(a / b, 2.0, rel_tol=1e-12):
            raise DomainError("eps ladder must halve at every rung")
    vals = [verify_eigen_by_convolution(KernelSpec(order, length, eps=e), l, quad_tol) for e in ladder]
    return richardson(vals, 2.0)


def _lorentzian_derivative(m: int):
    import sympy

    x, e = sympy.symbols("x e", real=True)
    expr = (-1) ** (m + 1) * sympy.diff(e / (sympy.pi * (x**2 + e**2)), x, 2 * m)
    return sympy.lambdify((x, e), sympy.simplify(expr), "numpy")


def integer_order_check(m: int, length: float | None, eps: float, x=None, n_max: int = 64) -> IntegerOrderReport:
    """Compare the regularized kernel at alpha = 2m with derivatives of the Lorentzian.

    ``m = 0`` is allowed here (negative delta) even though alpha = 0 is not a
    valid chain order.
    """
    if m < 0:
        raise DomainError("m must be >= 0")
    if not eps > 0:
        raise DomainError("eps must be positive")
    alpha = 2.0 * m
    oracle_fn = _lorentzian_derivative(m)
    if x is None:
        span = 0.5 * length if length is not None else 1.0
        x = np.concatenate([[0.0], np.geomspace(0.1 * eps, span, 25)])
    x = np.asarray(x, dtype=float)
    if length is None:
        kernel = _regularized(alpha, x, eps)
        oracle = oracle_fn(x, eps) * np.ones_like(x)
    else:
        kernel = _periodic_regularized_raw(alpha, length, x, eps, n_max)
        n = np.arange(-n_max, n_max + 1, dtype=float)
        oracle = np.sum(oracle_fn(x[:, None] - n * length, eps), axis=-1)
    return IntegerOrderReport(m, length, eps, x, np.asarray(kernel), np.asarray(oracle))


def zero_string_limit_check(order, eps: float, X: float) -> float:
    """Full-line integral of the regularized kernel.

    [-X, X] is integrated numerically; beyond +-X the hypersingular kernel is
    integrated in closed form.  The result vanishes as eps -> 0.
    """
    order = as_order(order)
    if not eps > 0 or not X > eps:
        raise DomainError("need eps > 0 and X > eps")

    def f(y):
        return float(_regularized(order.alpha, y, eps))

    pts = _panels(eps, X)
    parts = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for a, b in zip(pts[:-1], pts[1:]):
            val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
            parts.append(val)
    inner = 2.0 * math.fsum(parts)
    outer = 2.0 * _riesz_constant(order) * X**-order.alpha / order.alpha
    return inner + outer


def convergence_study(order, length: float, rho0: float, A_alpha: float, x: float, h_sequence) -> ConvergenceReport:
    """Scaled ring elements -mu(h) h^-2 f_N(x/h) against the periodic continuum kernel."""
    order = as_order(order)
    hs = [float(h) for h in h_sequence]
    if any(b >= a for a, b in zip(hs[:-1], hs[1:])):
        raise DomainError("h_sequence must be strictly decreasing")
    target = rho0 * A_alpha * periodic_kernel_zeta(KernelSpec(order, length), x)
    rows = []
    for h in hs:
        n_real, p_real = length / h, x / h
        n, p = round(n_real), round(p_real)
        if abs(n_real - n) > 1e-9 or abs(p_real - p) > 1e-9:
            raise AlignmentError(f"x={x} or L={length} is not a multiple of h={h}")
        mu, omega2 = scaling_constants(h, order, rho0, A_alpha)
        f = element_periodic_spectral(ChainSpec(n, order, omega2=omega2, mu=mu, h=h), p % n)
        discrete = -mu / h**2 * f
        rows.append(ConvergenceRow(h, n, x, discrete, target, abs(discrete - target)))
    errs = np.array([r.abs_error for r in rows])
    fitted = math.nan
    if len(rows) >= 2 and np.all(errs > 0):
        fitted = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    return ConvergenceReport(order.alpha, length, tuple(rows), fitted)
