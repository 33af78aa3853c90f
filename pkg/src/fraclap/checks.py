"""Named identity and oracle checks run by ``fraclap verify``.

Every check returns the quantity under test next to its reference and a
tolerance; ``run_checks`` applies the comparison, optionally after scaling
the tested values by ``1 + fault`` to exercise the failure path.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import chain, continuum, specfun
from .chain import ChainSpec, Method
from .specfun import FracOrder

ALPHAS = (0.5, 1.0, 1.5, 2.0, 2.5, math.pi, 3.7)
RING_SIZES = (1, 2, 3, 8, 17, 64)
SEED = 20240601


@dataclass(frozen=True)
class Comparison:
    value: np.ndarray
    reference: np.ndarray
    rtol: float = 0.0
    atol: float = 0.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_abs_error: float
    worst_ratio: float
    rtol: float
    atol: float
    count: int

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_abs_error": self.max_abs_error,
            "worst_error_over_bound": self.worst_ratio,
            "rtol": self.rtol,
            "atol": self.atol,
            "samples": self.count,
        }


def _cmp(value, reference, rtol=0.0, atol=0.0) -> Comparison:
    return Comparison(np.atleast_1d(np.asarray(value, float)), np.atleast_1d(np.asarray(reference, float)), rtol, atol)


def check_euler_reflection() -> Comparison:
    rng = np.random.default_rng(SEED)
    mus = rng.uniform(0.001, 0.999, 1000)
    ns = rng.integers(0, 21, 1000)
    vals, refs = [], []
    for mu, n in zip(mus, ns):
        z = mu + n
        vals.append((specfun.gamma(1.0 - z) * specfun.gamma(z)).value)
        k = round(z)
        # sin(pi z) = (-1)^k sin(pi (z - k)); z - k is exact, pi * z is not
        refs.append(math.pi / ((-1) ** k * math.sin(math.pi * (z - k))))
    return _cmp(vals, refs, rtol=1e-12)


def check_duplication() -> Comparison:
    rng = np.random.default_rng(SEED + 1)
    alphas = rng.uniform(1e-3, 30.0, 1000)
    vals = [(specfun.gamma(a + 1) / specfun.gamma(a / 2 + 1)).value for a in alphas]
    refs = [(2.0**a / math.sqrt(math.pi)) * specfun.gamma((a - 1) / 2 + 1).value for a in alphas]
    return _cmp(vals, refs, rtol=1e-12)


def check_binomial_recursion() -> Comparison:
    vals, refs = [], []
    for a in ALPHAS:
        o = FracOrder(a)
        for p in range(0, 50):
            nxt = specfun.generalized_binomial(o, p + 1).value
            cur = specfun.generalized_binomial(o, p).value
            vals.append(nxt)
            refs.append(cur * (o.half - p) / (o.half + p + 1))
    return _cmp(vals, refs, rtol=1e-12, atol=1e-300)


def check_addition_rule() -> Comparison:
    vals, refs = [], []
    for a in ALPHAS:
        o = FracOrder(a)
        for p in range(-50, 51):
            lhs = specfun.generalized_binomial(o, p).value + specfun.generalized_binomial(o, p - 1).value
            vals.append(lhs)
            refs.append(specfun.shifted_binomial(o, p).value)
    return _cmp(vals, refs, rtol=1e-12, atol=1e-300)


def check_integer_binomial() -> Comparison:
    vals, refs = [], []
    for m in range(1, 6):
        for p in range(0, m + 4):
            vals.append(specfun.generalized_binomial(2 * m, p).value)
            refs.append(math.comb(2 * m, m + p) if p <= m else 0.0)
    return _cmp(vals, refs, rtol=1e-14)


def check_branch_consistency() -> Comparison:
    vals, refs = [], []
    for a in (0.5, 1.0, 1.5, 2.5, math.pi, 3.7, 5.3):
        o = FracOrder(a)
        for p in range(0, o.p0 + 1):
            vals.append(specfun.generalized_binomial(o, p, branch=2).value)
            refs.append(specfun.generalized_binomial(o, p, branch=1).value)
    return _cmp(vals, refs, rtol=1e-10)


def check_diagonal() -> Comparison:
    vals = [chain.element_infinite(a, 0) for a in ALPHAS]
    refs = [math.gamma(a + 1) / math.gamma(a / 2 + 1) ** 2 for a in ALPHAS]
    return _cmp(vals, refs, rtol=1e-12)


def check_quadrature_oracle() -> Comparison:
    vals, refs = [], []
    for a in ALPHAS:
        for p in range(21):
            vals.append(chain.element_infinite(a, p))
            refs.append(chain.element_infinite_quadrature(a, p, tol=1e-12))
    return _cmp(vals, refs, atol=1e-10)


def check_spectral_imagesum() -> Comparison:
    vals, refs = [], []
    for a in ALPHAS:
        for n in RING_SIZES:
            spec = ChainSpec(n, a)
            vals.extend(chain.build_symbol_row(spec, Method.IMAGE_SUM).values)
            refs.extend(chain.build_symbol_row(spec, Method.SPECTRAL).values)
    return _cmp(vals, refs, rtol=1e-8, atol=1e-10)


def check_zero_mode() -> Comparison:
    sums, eig_counts = [], []
    for a in ALPHAS:
        for n in RING_SIZES:
            spec = ChainSpec(n, a)
            row = chain.build_symbol_row(spec)
            sums.append(math.fsum(row.values))
            ev = np.linalg.eigvalsh(chain.laplacian_matrix(spec, row))
            zero = int(np.sum(np.abs(ev) <= 1e-10))
            positive = int(np.sum(ev[np.abs(ev) > 1e-10] >= 0))
            eig_counts.append(zero - 1 + positive)
    return _cmp(sums + eig_counts, [0.0] * (len(sums) + len(eig_counts)), atol=1e-10)


def check_classical_recovery() -> Comparison:
    vals, refs = [], []
    for n in (3, 4, 8, 17, 64):
        spec = ChainSpec(n, 2.0, omega2=1.7)
        row = chain.build_symbol_row(spec)
        ref = np.zeros(n)
        ref[0] = 2.0
        ref[1] += -1.0
        ref[-1] += -1.0
        vals.extend(row.values)
        refs.extend(1.7 * ref)
        table = chain.dispersion(spec)
        vals.extend(table.omega2)
        refs.extend(4.0 * 1.7 * np.sin(table.kappa / 2) ** 2)
    return _cmp(vals, refs, rtol=1e-12, atol=1e-12)


def check_asymptotics() -> Comparison:
    p = 1000
    return _cmp(chain.element_infinite(1.0, p), chain.asymptotic_element(1.0, p), rtol=0.01)


def check_periodic_kernel_value() -> Comparison:
    spec = continuum.KernelSpec(1.0, 1.0)
    vals = [continuum.periodic_kernel_zeta(spec, 0.5), continuum.periodic_kernel_imagesum(spec, 0.5)]
    return _cmp(vals, [math.pi, math.pi], rtol=1e-8)


def check_zeta_imagesum() -> Comparison:
    vals, refs = [], []
    for a in (0.5, 1.0, 1.5, 2.5, 3.7):
        spec = continuum.KernelSpec(a, 1.0)
        for xi in np.linspace(0.1, 0.9, 9):
            vals.append(continuum.periodic_kernel_zeta(spec, xi))
            refs.append(continuum.periodic_kernel_imagesum(spec, xi))
    return _cmp(vals, refs, rtol=1e-8, atol=1e-12)


def check_periodicity() -> Comparison:
    vals, refs = [], []
    for a in (0.5, 1.0, 2.5):
        spec = continuum.KernelSpec(a, 2.0)
        for x in (0.3, 0.7, 1.1):
            base = continuum.periodic_kernel_zeta(spec, x)
            for shifted in (x + 2.0, 2.0 - x, x - 4.0):
                vals.append(continuum.periodic_kernel_zeta(spec, shifted))
                refs.append(base)
    return _cmp(vals, refs, rtol=1e-12)


def check_spectral_law() -> Comparison:
    # measured/expected within 1%; l = 0 is measured in units of |k_1|^alpha
    vals, refs = [], []
    for a in (1.0, 1.5, 2.0):
        unit = abs(continuum.periodic_eigenvalue(a, 1.0, 1))
        for l in (0, 1, 2, 3):
            got = continuum.extrapolated_eigenvalue(a, 1.0, l)
            ref = continuum.periodic_eigenvalue(a, 1.0, l)
            vals.append(got / ref if l else got / unit)
            refs.append(1.0 if l else 0.0)
    return _cmp(vals, refs, atol=0.01)


def check_constant_annihilation() -> Comparison:
    vals = []
    for a in (1.0, 1.5, 2.0):
        vals.append(continuum.verify_eigen_by_convolution(continuum.KernelSpec(a, 1.0, eps=1e-2), 0, 1e-6))
    return _cmp(vals, np.zeros(len(vals)), atol=1e-6)


def check_infinite_recovery() -> Comparison:
    # pointwise image deficit decays like L^-(alpha+1)
    slopes, refs, rises = [], [], []
    lengths = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    for a in (0.5, 1.0, 1.5):
        inf = continuum.riesz_kernel_infinite(a, 0.5)
        d = np.array([abs(continuum.periodic_kernel_zeta(continuum.KernelSpec(a, L), 0.5) - inf) for L in lengths])
        slopes.append(np.polyfit(np.log(lengths), np.log(d), 1)[0])
        refs.append(-(a + 1.0))
        rises.append(float(np.sum(np.diff(d) >= 0)))
    return _cmp(slopes + rises, refs + [0.0] * len(rises), atol=0.2)


def check_continuum_limit() -> Comparison:
    rep = continuum.convergence_study(1.0, 1.0, 1.0, 1.0, 0.5, [2.0**-k for k in range(3, 9)])
    e = rep.errors
    rises = float(np.sum(np.diff(e) >= 0))
    shrink = float(e[-1] <= 0.1 * e[0])
    return _cmp([rises, shrink], [0.0, 1.0], atol=0.0)


def check_integer_order() -> Comparison:
    vals, refs = [], []
    for m in (0, 1, 2):
        for length in (None, 1.0):
            rep = continuum.integer_order_check(m, length, 1e-2)
            vals.extend(rep.kernel)
            refs.extend(rep.oracle)
    return _cmp(vals, refs, rtol=1e-8, atol=1e-8)


def check_zero_string() -> Comparison:
    vals = []
    for a in (1.0, 2.0):
        for eps in (1e-3, 5e-4):
            vals.append(continuum.zero_string_limit_check(a, eps, 10.0))
    return _cmp(vals, np.zeros(len(vals)), atol=1e-5)


def check_figure_data() -> Comparison:
    # surface peak against the eigenvalue of the assembled ring operator at kappa = pi
    vals, refs = [], []
    n = 64
    for a in np.linspace(0.25, 4.0, 16):
        row = chain.build_symbol_row(ChainSpec(n, a))
        eig = np.fft.fft(row.values).real[n // 2]
        vals.append(float(chain.normalized_frequency(a, math.pi)))
        refs.append(0.5 * math.sqrt(eig))
    signs = []
    for a in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5):
        k = continuum.periodic_kernel_zeta(continuum.KernelSpec(a, 1.0), 0.5)
        signs.append(np.sign(k))
        refs.append(1.0 if a < 2 else (0.0 if a == 2 else -1.0))
    return _cmp(vals + signs, refs, rtol=1e-12)


CHECKS = {
    "euler-reflection": check_euler_reflection,
    "duplication": check_duplication,
    "binomial-recursion": check_binomial_recursion,
    "addition-rule": check_addition_rule,
    "integer-binomial": check_integer_binomial,
    "branch-consistency": check_branch_consistency,
    "diagonal": check_diagonal,
    "quadrature-oracle": check_quadrature_oracle,
    "spectral-imagesum": check_spectral_imagesum,
    "zero-mode": check_zero_mode,
    "classical-recovery": check_classical_recovery,
    "asymptotics": check_asymptotics,
    "periodic-kernel-value": check_periodic_kernel_value,
    "zeta-imagesum": check_zeta_imagesum,
    "periodicity": check_periodicity,
    "spectral-law": check_spectral_law,
    "constant-annihilation": check_constant_annihilation,
    "infinite-recovery": check_infinite_recovery,
    "continuum-limit": check_continuum_limit,
    "integer-order": check_integer_order,
    "zero-string": check_zero_string,
    "figure-data": check_figure_data,
}


def evaluate(name: str, comparison: Comparison, fault: float = 0.0) -> CheckResult:
    value = comparison.value * (1.0 + fault) + fault
    diff = np.abs(value - comparison.reference)
    bound = comparison.atol + comparison.rtol * np.abs(comparison.reference)
    passed = bool(np.all(diff <= bound))
    # error measured in units of the allowed bound; <= 1 everywhere means pass
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, diff / np.where(bound > 0, bound, 1.0), np.where(diff > 0, np.inf, 0.0))
    return CheckResult(
        name, passed, float(np.max(diff)), float(np.max(ratio)), comparison.rtol, comparison.atol, int(diff.size)
    )


def run_checks(names=None, fault: float = 0.0, workers: int = 1) -> list[CheckResult]:
    names = list(CHECKS) if not names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            comparisons = list(pool.map(lambda n: CHECKS[n](), names))
    else:
        comparisons = [CHECKS[n]() for n in names]
    return [evaluate(n, c, fault) for n, c in zip(names, comparisons)]
