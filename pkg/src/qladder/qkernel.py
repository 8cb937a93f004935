"""Scalar q-arithmetic: q-numbers, q-factorials, q-Pochhammer symbols and
basic hypergeometric series.

Everything here works over complex double precision.  The base q is a real
number with q > 0 and q != 1; infinite products additionally require q < 1.
Symmetric q-numbers

    [k]_q = (q^{k/2} - q^{-k/2}) / (q^{1/2} - q^{-1/2})

are the primitive (real or complex k), not a special-cased integer version.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "QKernelError",
    "NonConvergedError",
    "QBase",
    "SeriesSpec",
    "q_number",
    "alpha_q",
    "q_factorial",
    "q_binom_exponent",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_pochhammer_multi",
    "basic_hypergeometric",
    "require_finite",
]

# Hard cap on infinite-product factors; geometric decay for q < 1 means this
# is never reached for sane inputs.
_MAX_INF_FACTORS = 10**6


class QKernelError(ValueError):
    """Invalid argument to a q-arithmetic routine."""


class NonConvergedError(QKernelError):
    """A truncated series or product failed to settle within its budget."""


def require_finite(value, what="value"):
    """Return `value` unchanged, raising if it is NaN or infinite."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise QKernelError(f"{what} is not finite: {value!r}")
    return value


@dataclass(frozen=True)
class QBase:
    """The base q of the calculus.  q > 0 and q != 1.

    Infinite products are only defined for q < 1; operations that need them
    check `allows_infinite_products` and raise otherwise.
    """

    q: float

    def __post_init__(self):
        if not (self.q > 0.0):
            raise QKernelError(f"base q must be positive, got {self.q}")
        if self.q == 1.0:
            raise QKernelError("base q must differ from 1")
        if not math.isfinite(self.q):
            raise QKernelError(f"base q must be finite, got {self.q}")

    @property
    def allows_infinite_products(self) -> bool:
        return self.q < 1.0

    def pow(self, e):
        """q**e for real or complex exponent e."""
        if isinstance(e, complex):
            return cmath.exp(e * math.log(self.q))
        return math.exp(e * math.log(self.q))

    @property
    def sqrt_q(self) -> float:
        return math.sqrt(self.q)

    @property
    def k_q(self) -> float:
        """k_q = q^{1/2} - q^{-1/2} (negative for q < 1)."""
        s = self.sqrt_q
        return s - 1.0 / s

    def inverted(self) -> "QBase":
        """The base 1/q (used for families defined by q -> 1/q)."""
        return QBase(1.0 / self.q)


def q_number(k, base: QBase):
    """The symmetric q-number [k]_q = (q^{k/2}-q^{-k/2})/(q^{1/2}-q^{-1/2}).

    k may be any real (or complex) number; [k]_q is odd in k.
    """
    half = base.pow(k / 2.0)
    return (half - 1.0 / half) / base.k_q


def alpha_q(k, base: QBase):
    """alpha_q(k) = (q^{k/2} + q^{-k/2}) / 2; even in k, >= 1 for real k."""
    half = base.pow(k / 2.0)
    return (half + 1.0 / half) / 2.0


def q_factorial(n: int, base: QBase) -> float:
    """[n]_q! = [1]_q [2]_q ... [n]_q; the empty product is 1."""
    if n < 0 or n != int(n):
        raise QKernelError(f"q-factorial needs a nonnegative integer, got {n}")
    out = 1.0
    for k in range(1, int(n) + 1):
        out *= q_number(float(k), base)
    return out


def q_binom_exponent(n: int) -> float:
    """The exponent n(n-1)/2 appearing in q^{binom(n,2)} prefactors."""
    return n * (n - 1) / 2.0


def q_pochhammer(a, base: QBase, k: int):
    """(a;q)_k = prod_{m=0}^{k-1} (1 - a q^m) for integer k >= 0."""
    if k < 0 or k != int(k):
        raise QKernelError(f"q-Pochhammer order must be a nonnegative integer, got {k}")
    out = complex(1.0)
    aq = complex(a)
    for _ in range(int(k)):
        out *= 1.0 - aq
        aq *= base.q
    return out


def q_pochhammer_inf(a, base: QBase, tol: float = 1e-16):
    """(a;q)_infty = prod_{k>=0} (1 - a q^k), truncated once |a q^K| < tol.

    Requires 0 < q < 1.  The truncation criterion is factor distance from 1;
    the dropped tail multiplies the result by 1 + O(|a| q^K / (1-q)).
    """
    if not base.allows_infinite_products:
        raise QKernelError(
            f"infinite product requires q<1, got q={base.q}"
        )
    if tol <= 0.0:
        raise QKernelError("tolerance must be positive")
    out = complex(1.0)
    aq = complex(a)
    for _ in range(_MAX_INF_FACTORS):
        if abs(aq) < tol:
            return require_finite(out, "(a;q)_inf")
        out *= 1.0 - aq
        if out == 0.0:
            return out
        aq *= base.q
    raise NonConvergedError(
        f"(a;q)_inf did not truncate within {_MAX_INF_FACTORS} factors"
    )


def q_pochhammer_multi(values, base: QBase, k=None, tol: float = 1e-16):
    """(a_1,...,a_p;q)_k = prod_i (a_i;q)_k; k=None means the infinite product."""
    out = complex(1.0)
    for a in values:
        out *= q_pochhammer_inf(a, base, tol) if k is None else q_pochhammer(a, base, k)
    return out


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of a basic hypergeometric series _r phi_p.

    upper: numerator parameters a_1..a_r
    lower: denominator parameters b_1..b_p
    z:     argument
    terminate_at: optional known truncation order n (some upper parameter is
        q^{-n}); when set, exactly n+1 terms are summed, which avoids
        fuzzy detection of the vanishing Pochhammer factor.
    """

    upper: tuple
    lower: tuple
    z: complex
    terminate_at: int | None = field(default=None)


def _detect_termination(spec: SeriesSpec, base: QBase, max_terms: int) -> int | None:
    """Smallest m < max_terms with some upper parameter equal to q^{-m}."""
    best = None
    lq = math.log(base.q)
    for a in spec.upper:
        az = complex(a)
        if az == 0.0 or az.real <= 0.0 or abs(az.imag) > 1e-12 * abs(az):
            continue
        m = -math.log(abs(az)) / lq
        mi = round(m)
        if mi < 0 or mi >= max_terms:
            continue
        if abs(az - base.pow(float(-mi))) <= 1e-9 * abs(az):
            best = mi if best is None else min(best, mi)
    return best


def basic_hypergeometric(spec: SeriesSpec, base: QBase, max_terms: int = 2000):
    """Evaluate _r phi_p(a_1..a_r; b_1..b_p; q, z).

    The k-th term carries the standard extra factor
    [(-1)^k q^{k(k-1)/2}]^{p-r+1}.  Terminating series (an upper parameter of
    the form q^{-n}) are summed exactly; otherwise partial sums must converge
    before `max_terms` or NonConvergedError is raised.
    """
    if max_terms <= 0:
        raise QKernelError("max_terms must be positive")
    r = len(spec.upper)
    p = len(spec.lower)
    sign_power = p - r + 1

    stop = spec.terminate_at
    if stop is None:
        stop = _detect_termination(spec, base, max_terms)
    if stop is not None and stop >= max_terms:
        raise NonConvergedError(
            f"series terminates at {stop} but max_terms={max_terms}"
        )

    upper = [complex(a) for a in spec.upper]
    lower = [complex(b) for b in spec.lower]
    z = complex(spec.z)

    total = complex(1.0)
    term = complex(1.0)
    qk = 1.0  # q^k
    small_streak = 0
    for k in range(max_terms):
        if stop is not None and k >= stop:
            return require_finite(total, "basic hypergeometric series")
        num = complex(1.0)
        for a in upper:
            num *= 1.0 - a * qk
        den = 1.0 - base.q * qk  # the (q;q)_{k+1} factor
        for b in lower:
            f = 1.0 - b * qk
            if abs(f) < 1e-14 * (1.0 + abs(b * qk)):
                raise QKernelError(
                    f"lower parameter {b} hits q^{{-{k}}}: division by zero in series"
                )
            den *= f
        ratio = num / den * z
        if sign_power:
            ratio *= (-qk) ** sign_power
        term = term * ratio
        total += term
        if stop is None:
            if num == 0.0:
                return require_finite(total, "basic hypergeometric series")
            scale = max(abs(total), 1.0)
            if abs(term) <= 1e-15 * scale:
                small_streak += 1
                if small_streak >= 3:
                    return require_finite(total, "basic hypergeometric series")
            else:
                small_streak = 0
        qk *= base.q
    if stop is not None:
        return require_finite(total, "basic hypergeometric series")
    raise NonConvergedError(
        f"series did not converge within {max_terms} terms (|term|={abs(term):.3e})"
    )
