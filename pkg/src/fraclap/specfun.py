"""Real-argument special functions used by the lattice and continuum kernels.

Gamma values are carried as ``SignedLogValue`` so that ratios of large
factorials (the generalized centered binomial coefficients) never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, PoleError

TOL_POLE = 1e-9
TOL_INT = 1e-9

# B_2, B_4, ..., B_24
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
)


@dataclass(frozen=True)
class FracOrder:
    """Exponent ``alpha`` of the power-law characteristic function.

    ``half`` is alpha/2 and ``p0`` the smallest integer >= alpha/2.  When
    alpha/2 lies within ``TOL_INT`` of an integer the order is treated as
    exactly integer (local operator, binomial coefficients).
    """

    alpha: float
    half: float = field(init=False)
    p0: int = field(init=False)
    is_integer_half: bool = field(init=False)

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha <= 0.0:
            raise DomainError(f"alpha must be a finite positive number, got {self.alpha!r}")
        half = alpha / 2.0
        is_int = abs(half - round(half)) < TOL_INT
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "half", half)
        object.__setattr__(self, "is_integer_half", is_int)
        object.__setattr__(self, "p0", int(round(half)) if is_int else math.ceil(half))

    @property
    def m(self) -> int:
        """Integer alpha/2; only meaningful when ``is_integer_half``."""
        return int(round(self.half))

    def sin_factor(self) -> float:
        """sin(alpha*pi/2), exactly zero for integer alpha/2."""
        if self.is_integer_half:
            return 0.0
        # sin(pi h) = (-1)^k sin(pi (h - k)) with k = round(h); h - k is exact
        k = round(self.half)
        return (-1.0) ** k * math.sin(math.pi * (self.half - k))


def as_order(alpha) -> FracOrder:
    return alpha if isinstance(alpha, FracOrder) else FracOrder(alpha)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``; sign 0 is exact zero."""

    sign: int
    log_magnitude: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "log_magnitude", -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0.0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.value

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_magnitude)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_float(float(other))
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0, -math.inf)
        return SignedLogValue(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_float(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero SignedLogValue")
        if self.sign == 0:
            return self
        return SignedLogValue(self.sign * other.sign, self.log_magnitude - other.log_magnitude)


def _is_pole(x: float) -> bool:
    n = round(x)
    return n <= 0 and abs(x - n) < TOL_POLE


def gamma(x: float) -> SignedLogValue:
    """Gamma function for real ``x`` as a signed log value.

    Negative arguments go through the reflection formula
    ``Gamma(x) = pi / (sin(pi x) Gamma(1 - x))``.
    """
    x = float(x)
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0.0:
        return SignedLogValue(1, math.lgamma(x))
    # sin(pi x) for x < 0; reduce first to keep the phase accurate
    # |sin(pi x)| = |sin(pi r)| with r = x - round(x), an exact difference
    s = math.sin(math.pi * (x - round(x)))
    sign = 1 if (int(math.floor(x)) % 2 == 0) else -1
    log_mag = math.log(math.pi) - math.log(abs(s)) - math.lgamma(1.0 - x)
    return SignedLogValue(sign, log_mag)


def rgamma(x: float) -> SignedLogValue:
    """1/Gamma(x), exactly zero at the poles."""
    try:
        g = gamma(x)
    except PoleError:
        return SignedLogValue(0, -math.inf)
    return SignedLogValue(g.sign, -g.log_magnitude)


def binomial(xi: float, xi1: float) -> SignedLogValue:
    """Generalized binomial coefficient xi! / (xi1! (xi - xi1)!).

    Uses the analytically continued Gamma function; a pole in either
    denominator factorial gives an exact zero.
    """
    return gamma(xi + 1.0) * rgamma(xi1 + 1.0) * rgamma(xi - xi1 + 1.0)


def shifted_binomial(order, p: int) -> SignedLogValue:
    """(alpha + 1 choose alpha/2 + p), the right-hand side of the addition rule.

    The lower factorial arguments are formed from alpha/2 directly so that no
    rounding of alpha + 1 is amplified near a Gamma pole.
    """
    order = as_order(order)
    a = order.half
    p = int(p)
    if p <= 0:
        # symmetric under alpha/2 + p -> alpha/2 + 1 - p
        p = 1 - p
    x = p - 1 - a
    if x <= 0.0:
        return gamma(order.alpha + 2.0) * rgamma(a + p + 1.0) * rgamma((a - p) + 2.0)
    # 1/Gamma(1 - x) = sin(pi x) Gamma(x) / pi, sin(pi x) = (-1)^p sin(pi alpha/2)
    lead = SignedLogValue.from_float(order.sin_factor() / math.pi) * gamma(order.alpha + 2.0)
    out = lead * gamma_ratio(x, order.alpha + 2.0)
    return out if p % 2 == 0 else -out


def _binomial_positive_args(order: FracOrder, p: int) -> SignedLogValue:
    # alpha! / ((alpha/2 + p)! (alpha/2 - p)!)
    a = order.half
    return gamma(order.alpha + 1.0) * rgamma(a + p + 1.0) * rgamma(a - p + 1.0)


_PRODUCT_STEPS = 512


def gamma_ratio(x: float, s: float) -> SignedLogValue:
    """Gamma(x) / Gamma(x + s).

    For moderate x > 0 the ratio is carried down to x in [1, 2) with exact
    unit steps, which keeps the relative error near (steps * machine eps)
    instead of eps * |lgamma(x)|.
    """
    k = math.floor(x) - 1
    if x <= 2.0 or k > _PRODUCT_STEPS:
        return gamma(x) * rgamma(x + s)
    base = x - k
    out = gamma(base) * rgamma(base + s)
    prod = 1.0
    for j in range(k):
        prod *= (base + j) / (base + j + s)
    return out * SignedLogValue(1, math.log(prod))


def _binomial_reflected(order: FracOrder, p: int) -> SignedLogValue:
    # (-1)^(p+1) (alpha!/pi) sin(alpha pi/2) (p - alpha/2 - 1)! / (alpha/2 + p)!
    a = order.half
    s = order.sin_factor()
    if s == 0.0:
        return SignedLogValue(0, -math.inf)
    lead = SignedLogValue.from_float(s / math.pi) * gamma(order.alpha + 1.0)
    ratio = gamma_ratio(p - a, order.alpha + 1.0)
    out = lead * ratio
    return out if p % 2 == 1 else -out


def generalized_binomial(order, p: int, *, branch: int | None = None) -> SignedLogValue:
    """Centered binomial coefficient (alpha choose alpha/2 + p), symmetric in p.

    For integer alpha/2 = m this is the ordinary binomial (2m choose m + p),
    exactly zero for |p| > m.  Otherwise branch 1 (all Gamma arguments
    positive) is used for |p| <= ceil(alpha/2) and branch 2 (reflected form)
    beyond.  ``branch`` forces one of the two forms; both are valid for every
    p when alpha/2 is not an integer.
    """
    order = as_order(order)
    p = abs(int(p))
    if order.is_integer_half:
        m = order.m
        if p > m:
            return SignedLogValue(0, -math.inf)
        return SignedLogValue(1, math.log(math.comb(2 * m, m + p)))
    if branch is None:
        branch = 1 if p <= order.p0 else 2
    if branch == 1:
        return _binomial_positive_args(order, p)
    if branch == 2:
        return _binomial_reflected(order, p)
    raise ValueError(f"branch must be 1 or 2, got {branch!r}")


def hurwitz_zeta(beta: float, x: float, tol: float = 1e-12) -> float:
    """Hurwitz zeta sum_{n>=0} (x + n)^(-beta) for real beta > 1, x > 0.

    Direct terms up to a shift M, then the Euler-Maclaurin tail
    (integral, half-term and Bernoulli corrections).  M grows until the last
    correction used is below tol/10 relative to the result.
    """
    beta = float(beta)
    x = float(x)
    if not beta > 1.0:
        raise DomainError(f"hurwitz_zeta needs beta > 1, got {beta!r}")
    if not x > 0.0:
        raise DomainError(f"hurwitz_zeta needs x > 0, got {x!r}")

    m = max(0, math.ceil(beta + 12.0 - x))
    while True:
        b = x + m
        head = math.fsum((x + n) ** -beta for n in range(m))
        tail = [b ** (1.0 - beta) / (beta - 1.0), 0.5 * b**-beta]
        # rising factorial beta (beta+1) ... (beta+2k-2) and b^(-beta-2k+1)
        rising = beta
        power = b ** (-beta - 1.0)
        fact = 2.0
        last = 0.0
        for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
            last = b2k / fact * rising * power
            tail.append(last)
            rising *= (beta + 2 * k - 1) * (beta + 2 * k)
            power /= b * b
            fact *= (2 * k + 1) * (2 * k + 2)
        total = head + math.fsum(tail)
        if abs(last) <= 0.1 * tol * max(1.0, abs(total)):
            return total
        m = 2 * m + 8


def hurwitz_zeta_abs(beta: float, x: float, tol: float = 1e-12) -> float:
    """Absolute-value variant sum_{n>=0} |x + n|^(-beta) for x in (-1, 1], x != 0."""
    beta = float(beta)
    x = float(x)
    if not beta > 1.0:
        raise DomainError(f"hurwitz_zeta_abs needs beta > 1, got {beta!r}")
    if not (-1.0 < x <= 1.0) or x == 0.0:
        raise DomainError(f"hurwitz_zeta_abs needs x in (-1, 1] without 0, got {x!r}")
    if x > 0.0:
        return hurwitz_zeta(beta, x, tol)
    return abs(x) ** -beta + hurwitz_zeta(beta, 1.0 + x, tol)
