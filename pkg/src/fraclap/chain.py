"""Fractional Laplacian on the infinite chain and the N-periodic ring.

The operator on a ring of N particles is a symmetric circulant, so it is kept
as its first row (``SymbolRow``); the dense matrix is built only on request.
Element functions work with Omega^2 = 1 unless they take a ``ChainSpec``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.integrate import IntegrationWarning, quad
from scipy.special import bernoulli

from .errors import ConvergenceError, DimensionMismatch, DomainError
from .specfun import FracOrder, as_order, generalized_binomial, hurwitz_zeta

DEFAULT_TOL = 1e-10
MAX_IMAGE_TERMS = 10**6


class Method(str, enum.Enum):
    SPECTRAL = "spectral"
    IMAGE_SUM = "imagesum"


@dataclass(frozen=True)
class ChainSpec:
    """Ring of ``n`` identical particles; ``n=None`` means the infinite chain."""

    n: int | None
    order: FracOrder
    omega2: float = 1.0
    mu: float = 1.0
    h: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", as_order(self.order))
        if self.n is not None:
            if int(self.n) != self.n or self.n < 1:
                raise DomainError(f"particle count must be an integer >= 1, got {self.n!r}")
            object.__setattr__(self, "n", int(self.n))
        if not self.omega2 > 0:
            raise DomainError(f"omega2 must be positive, got {self.omega2!r}")
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu!r}")
        if not self.h > 0:
            raise DomainError(f"h must be positive, got {self.h!r}")

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    @property
    def length(self) -> float:
        if self.n is None:
            return math.inf
        return self.n * self.h


def _require_finite(spec: ChainSpec) -> int:
    if spec.n is None:
        raise DomainError("operation needs a finite chain (n is None)")
    return spec.n


@dataclass(frozen=True)
class SymbolRow:
    """First row f_N(|p|), p = 0..N-1, of the circulant characteristic matrix."""

    order: FracOrder
    values: np.ndarray
    generator: Method
    omega2: float = 1.0

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def row_sum_residual(self) -> float:
        return float(abs(math.fsum(self.values)))

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class DisplacementField:
    """Displacements u_p on the ring, indexed cyclically."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim != 1:
            raise DimensionMismatch("displacement field must be one-dimensional")
        v = v.astype(complex if np.iscomplexobj(v) else float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, p: int):
        return self.values[p % len(self.values)]

    @classmethod
    def bloch(cls, n: int, l: int) -> "DisplacementField":
        p = np.arange(n)
        return cls(np.exp(2j * np.pi * l * p / n))


@dataclass(frozen=True)
class DispersionTable:
    l: np.ndarray
    kappa: np.ndarray
    omega2: np.ndarray

    def __len__(self) -> int:
        return len(self.l)

    def rows(self):
        return list(zip(self.l.tolist(), self.kappa.tolist(), self.omega2.tolist()))


# -- infinite chain -------------------------------------------------------------


def element_infinite(order, p: int) -> float:
    """Closed-form element (-1)^p (alpha choose alpha/2 + p) of the infinite chain."""
    order = as_order(order)
    p = abs(int(p))
    c = generalized_binomial(order, p).value
    return -c if p % 2 else c


def element_infinite_quadrature(order, p: int, tol: float = 1e-12) -> float:
    """Element of the infinite chain by quadrature over the Brillouin zone.

    (1/pi) int_0^pi cos(p k) (4 sin^2(k/2))^(alpha/2) dk, integrated with a
    cosine-weighted adaptive rule.
    """
    order = as_order(order)
    if not tol > 0:
        raise DomainError("tol must be positive")
    p = abs(int(p))
    alpha = order.alpha

    def integrand(k):
        return (2.0 * math.sin(0.5 * k)) ** alpha

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if p == 0:
            val, err = quad(integrand, 0.0, math.pi, epsabs=0.1 * tol, epsrel=0.0, limit=500)
        else:
            val, err = quad(
                integrand, 0.0, math.pi, weight="cos", wvar=p,
                epsabs=0.1 * tol, epsrel=0.0, limit=500,
            )
    val /= math.pi
    err /= math.pi
    if not err <= tol:
        raise ConvergenceError(f"quadrature for p={p}, alpha={alpha} stalled at error {err:.3g} > {tol:.3g}")
    return val


def asymptotic_element(order, p: int) -> float:
    """Power-law tail -(alpha!/pi) sin(alpha pi/2) p^(-alpha-1) of the infinite chain."""
    order = as_order(order)
    p = abs(int(p))
    if p < 1:
        raise DomainError("asymptotic_element needs |p| >= 1")
    s = order.sin_factor()
    if s == 0.0:
        return 0.0
    return -math.gamma(order.alpha + 1.0) / math.pi * s * p ** (-order.alpha - 1.0)


def _tail_coefficients(s: float, terms: int) -> np.ndarray:
    """Coefficients e_j with Gamma(w + 1/2 - s/2)/Gamma(w + 1/2 + s/2) ~ w^-s sum e_j w^-2j."""
    nmax = 2 * terms + 1
    b = bernoulli(nmax)
    h = 0.5 + 0.5 * s

    def bpoly(n):
        return sum(math.comb(n, k) * b[k] * h ** (n - k) for k in range(n + 1))

    d = [0.0] + [2.0 * bpoly(2 * j + 1) / (2 * j * (2 * j + 1)) for j in range(1, terms + 1)]
    e = [1.0]
    for n in range(1, terms + 1):
        e.append(math.fsum(k * d[k] * e[n - k] for k in range(1, n + 1)) / n)
    return np.array(e)


_TAIL_TERMS = 8


def _image_tail(order: FracOrder, n: int, p: int, n0: int) -> tuple[float, float]:
    """Sum over k >= n0 of f_inf(kN + p) + f_inf(kN - p), with an error estimate."""
    s = order.alpha + 1.0
    c = math.gamma(order.alpha + 1.0) / math.pi * order.sin_factor()
    e = _tail_coefficients(s, _TAIL_TERMS + 1)
    parts = []
    for j, ej in enumerate(e):
        t = s + 2 * j
        z = hurwitz_zeta(t, n0 + p / n) + hurwitz_zeta(t, n0 - p / n)
        parts.append(ej * n**-t * z)
    total = -c * math.fsum(parts[:-1])
    return total, abs(c * parts[-1])


def element_periodic_imagesum(spec: ChainSpec, p: int, tol: float = DEFAULT_TOL) -> float:
    """Ring element as the image series sum_n f_inf(|p - nN|), scaled by Omega^2.

    Images up to a cutoff are summed exactly; the remaining tail uses the
    large-argument expansion of the Gamma ratio summed with Hurwitz zeta.
    """
    n = _require_finite(spec)
    order = spec.order
    if not 0 <= p < n:
        raise DomainError(f"p must lie in [0, {n - 1}], got {p!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")

    if order.is_integer_half:
        m = order.m
        kmax = (m + p) // n + 1
        terms = [element_infinite(order, p)]
        for k in range(1, kmax + 1):
            terms.append(element_infinite(order, k * n + p))
            terms.append(element_infinite(order, k * n - p))
        return spec.omega2 * math.fsum(terms)

    s = order.alpha + 1.0
    w_min = 40.0 + 2.0 * s
    n0 = max(2, math.ceil((w_min + p) / n) + 1)
    while True:
        if n0 > MAX_IMAGE_TERMS:
            raise ConvergenceError(f"image series for p={p}, N={n} needs more than {MAX_IMAGE_TERMS} terms")
        terms = [element_infinite(order, p)]
        for k in range(1, n0):
            terms.append(element_infinite(order, k * n + p))
            terms.append(element_infinite(order, k * n - p))
        tail, err = _image_tail(order, n, p, n0)
        if err <= 0.1 * tol:
            break
        n0 *= 2
    return spec.omega2 * (math.fsum(terms) + tail)


# -- finite ring ----------------------------------------------------------------


def _eigen_symbol(order: FracOrder, n: int) -> np.ndarray:
    kappa = 2.0 * np.pi * np.arange(n) / n
    return (2.0 * np.abs(np.sin(0.5 * kappa))) ** order.alpha


def element_periodic_spectral(spec: ChainSpec, p: int) -> float:
    """Ring element (Omega^2/N) sum_l exp(i kappa_l p) (4 sin^2(kappa_l/2))^(alpha/2)."""
    n = _require_finite(spec)
    if not 0 <= p < n:
        raise DomainError(f"p must lie in [0, {n - 1}], got {p!r}")
    lam = _eigen_symbol(spec.order, n)
    phase = 2.0 * np.pi * np.arange(n) * p / n
    re = math.fsum(lam * np.cos(phase)) / n
    im = math.fsum(lam * np.sin(phase)) / n
    scale = max(1.0, float(np.max(lam)))
    if abs(im) > 1e-12 * scale:
        raise AssertionError(f"spectral sum has imaginary residue {im:.3g}")
    return spec.omega2 * re


def build_symbol_row(spec: ChainSpec, method: Method | str = Method.SPECTRAL, tol: float = DEFAULT_TOL) -> SymbolRow:
    """Assemble the first row f_N(p), p = 0..N-1, including the Omega^2 factor."""
    n = _require_finite(spec)
    method = Method(method)
    if method is Method.SPECTRAL:
        lam = _eigen_symbol(spec.order, n)
        spectrum = np.fft.fft(lam) / n
        scale = max(1.0, float(np.max(lam)))
        if np.max(np.abs(spectrum.imag)) > 1e-12 * scale:
            raise AssertionError("spectral row has a non-negligible imaginary part")
        values = spectrum.real
    else:
        values = np.array([element_periodic_imagesum(spec, p, tol) / spec.omega2 for p in range(n)])

    mirror = values[(-np.arange(n)) % n]
    asym = float(np.max(np.abs(values - mirror)))
    if asym > 1e-10 * max(1.0, float(np.max(np.abs(values)))):
        raise AssertionError(f"row violates reflection symmetry by {asym:.3g}")
    values = 0.5 * (values + mirror)
    return SymbolRow(spec.order, spec.omega2 * values, method, spec.omega2)


def _check_row(spec: ChainSpec, row: SymbolRow) -> int:
    n = _require_finite(spec)
    if row.n != n:
        raise DimensionMismatch(f"row has {row.n} entries, chain has {n}")
    if row.order.alpha != spec.order.alpha:
        raise DomainError("row was built for a different alpha")
    return n


def laplacian_matrix(spec: ChainSpec, row: SymbolRow) -> np.ndarray:
    """Dense N x N matrix with entries -mu * row[(p - q) mod N]."""
    _check_row(spec, row)
    return scipy.linalg.circulant(-spec.mu * row.values)


def dispersion(spec: ChainSpec) -> DispersionTable:
    """Eigenvalues omega^2(kappa_l) = Omega^2 2^alpha |sin(kappa_l/2)|^alpha, l = 0..N-1."""
    n = _require_finite(spec)
    l = np.arange(n)
    kappa = 2.0 * np.pi * l / n
    omega2 = spec.omega2 * 2.0**spec.order.alpha * np.abs(np.sin(0.5 * kappa)) ** spec.order.alpha
    return DispersionTable(l, kappa, omega2)


def normalized_frequency(order, kappa):
    """omega/omega0 with omega0 = 2 Omega: 0.5 * 2^(alpha/2) |sin(kappa/2)|^(alpha/2)."""
    a = as_order(order).alpha
    return 0.5 * 2.0 ** (a / 2) * np.abs(np.sin(0.5 * np.asarray(kappa, float))) ** (a / 2)


def _as_field(u, n: int) -> np.ndarray:
    vals = u.values if isinstance(u, DisplacementField) else np.asarray(u)
    if vals.shape != (n,):
        raise DimensionMismatch(f"field has shape {vals.shape}, expected ({n},)")
    return vals


def _convolve(row: SymbolRow, vals: np.ndarray) -> np.ndarray:
    # (f u)_p = sum_q row[(p - q) mod N] u_q
    out = np.fft.ifft(np.fft.fft(row.values) * np.fft.fft(vals))
    return out if np.iscomplexobj(vals) else out.real


def apply(row: SymbolRow, u, mu: float) -> DisplacementField:
    """Action of the Laplacian: (Delta u)_p = -mu sum_q row[(p - q) mod N] u_q."""
    vals = _as_field(u, row.n)
    return DisplacementField(-mu * _convolve(row, vals))


def elastic_energy(row: SymbolRow, u, mu: float) -> float:
    """Quadratic form (mu/2) sum_p conj(u_p) (f u)_p."""
    vals = _as_field(u, row.n)
    fu = _convolve(row, vals)
    return float(0.5 * mu * np.real(np.vdot(vals, fu)))


def infinite_row_partial_sum(order, pmax: int) -> float:
    """f_inf(0) + 2 sum_{p=1}^{pmax} f_inf(p); tends to 0 as pmax grows."""
    order = as_order(order)
    terms = [element_infinite(order, 0)] + [2.0 * element_infinite(order, p) for p in range(1, pmax + 1)]
    return math.fsum(terms)


def infinite_row_tail_bound(order, pmax: int) -> float:
    """Upper bound on |2 sum_{p > pmax} f_inf(p)| from the power-law asymptote.

    Uses Gamma(x)/Gamma(x + s) <= (x - 1/2)^-s, valid for x > 1/2.
    """
    order = as_order(order)
    c = math.gamma(order.alpha + 1.0) / math.pi * abs(order.sin_factor())
    x0 = pmax + 1 - order.half - 0.5
    if x0 <= 0.5:
        raise DomainError("pmax too small for the tail bound")
    # sum_{p > pmax} (p - a - 1/2)^-s <= x0^-s + int_{x0}^inf t^-s dt
    s = order.alpha + 1.0
    return 2.0 * c * (x0**-s + x0 ** (1.0 - s) / order.alpha)
