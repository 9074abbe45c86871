"""Exact verdicts for the point-count estimates.

Every estimate with a half-integer power of ``q`` is squared (twice for the
``A + B sqrt(q)`` shapes) so pass/fail is decided on Python integers.  Floats
never enter a decision; the tightness ratio is rendered from integer square
roots for display only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction

_SCALE_DIGITS = 40


@dataclass
class BoundVerdict:
    name: str
    lhs_sq: int
    rhs_sq: int
    tightness: str
    hypothesis_violation: bool = False
    aux: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lhs_sq <= self.rhs_sq

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class ExistenceThreshold:
    n: int
    m: int
    k: int
    threshold: int


def p_count(q: int, r: int) -> int:
    """``q^r + ... + q + 1``, the number of points of P^r(F_q)."""
    if r < 0:
        return 0
    return sum(q**i for i in range(r + 1))


def format_ratio(num: int, den: int) -> str:
    """``num/den`` to 6 significant digits, e.g. ``1.23457E-5``."""
    if den == 0:
        return "inf" if num else "NA"
    if num == 0:
        return "0.00000E+0"
    ctx = Context(prec=6, rounding=ROUND_HALF_EVEN)
    value = ctx.divide(Decimal(num), Decimal(den))
    return f"{value:.5E}"


def sqrt_scaled(x: int) -> int:
    """``floor(sqrt(x) * 10**_SCALE_DIGITS)``."""
    return math.isqrt(x * 10 ** (2 * _SCALE_DIGITS))


def tightness(error: int, terms) -> str:
    """``|error| / sum(c * sqrt(r) for c, r in terms)``; display only."""
    den = sum(c * sqrt_scaled(r) for c, r in terms)
    return format_ratio(abs(error) * 10**_SCALE_DIGITS, den)


def leq_sum_with_root(lhs: int, base: int, root_coeff: int, radicand: int) -> tuple[int, int]:
    """Squared form of ``lhs <= base + root_coeff * sqrt(radicand)``.

    Returns ``(lhs_sq, rhs_sq)`` with ``lhs_sq <= rhs_sq`` exactly when the
    inequality holds.  All arguments are nonnegative.
    """
    inner = lhs - base
    if inner <= 0:
        return 0, root_coeff**2 * radicand
    return inner * inner, root_coeff**2 * radicand


def _max_exponent(n: int) -> int:
    return max(n - 1, 4)


def verdict_main(q: int, n: int, m: int, k: int, N: int, valid: bool = True) -> BoundVerdict:
    """``|N - q^(n-1)| <= 9 (mk)^max(n-1,4) q^(n-3/2)``."""
    mk = m * k
    err = N - q ** (n - 1)
    e = _max_exponent(n)
    rhs_sq = 81 * mk ** (2 * e) * q ** (2 * n - 3)
    return BoundVerdict("main_estimate", err * err, rhs_sq,
                        tightness(err, [(9 * mk**e * q ** (n - 2), q)]),
                        hypothesis_violation=not valid)


def verdict_diagonal(q: int, n: int, m: int, i: int, N_i: int, valid: bool = True) -> BoundVerdict:
    """``|N_i - q^(n-i-1)| <= (m-1)^(n-i) q^((n-i-2)/2) (1 + q^(1/2))``.

    With ``t = n - i`` and ``A = (m-1)^t`` the square of the right side is
    ``A^2 q^(t-2) (1 + q + 2 sqrt(q))``; for ``t = 1`` both sides are first
    multiplied by ``q``.  The weaker ``|E| <= 2 m^t q^((t-1)/2)`` is recorded
    in ``aux``.
    """
    if not 1 <= i <= n - 1:
        raise ValueError(f"diagonal estimate needs 1 <= i <= n-1, got i={i}")
    t = n - i
    err = N_i - q ** (t - 1)
    A2 = (m - 1) ** (2 * t)
    if t >= 2:
        lhs, base = err * err, A2 * q ** (t - 2)
    else:
        lhs, base = q * err * err, A2
    lhs_sq, rhs_sq = leq_sum_with_root(lhs, base * (1 + q), 2 * base, q)
    simplified = err * err <= 4 * m ** (2 * t) * q ** (t - 1)
    if t >= 2:
        terms = [((m - 1) ** t * q ** ((t - 2) // 2), q ** ((t - 2) % 2)),
                 ((m - 1) ** t * q ** ((t - 1) // 2), q ** ((t - 1) % 2))]
        tight = tightness(err, terms)
    else:
        # (m-1) q^(-1/2) (1 + sqrt q) = (m-1) (sqrt q + q) / q
        tight = format_ratio(abs(err) * q * 10**_SCALE_DIGITS,
                             (m - 1) * (sqrt_scaled(q) + q * 10**_SCALE_DIGITS))
    return BoundVerdict(f"diagonal_{i}", lhs_sq, rhs_sq, tight,
                        hypothesis_violation=not valid, aux={"simplified": simplified})


def verdict_pcl(q: int, n: int, m: int, k: int, count_pcl: int, valid: bool = True) -> BoundVerdict:
    """``||pcl(V)(F_q)| - p_(n-1)| <= (d-1)(d-2) q^(n-3/2) + 14 (d-1)^2 d^2 q^(n-2)``, ``d = mk``."""
    d = m * k
    err = count_pcl - p_count(q, n - 1)
    A = (d - 1) * (d - 2) * q ** (n - 2)
    B = 14 * (d - 1) ** 2 * d**2 * q ** (n - 2)
    lhs_sq, rhs_sq = leq_sum_with_root(abs(err), B, A, q)
    return BoundVerdict("pcl_bound", lhs_sq, rhs_sq, tightness(err, [(A, q), (B, 1)]),
                        hypothesis_violation=not valid)


def verdict_infinity(q: int, n: int, m: int, k: int, count_inf: int, valid: bool = True) -> BoundVerdict:
    """``||V^inf(F_q)| - p_(n-2)| <= (mk-1)^(n-1) q^((n-2)/2)``.

    ``aux["sharper_degree_m"]`` records the same test with ``(m-1)^(n-1)``,
    the coefficient matching the degree of the diagonal form; informational.
    """
    err = count_inf - p_count(q, n - 2)
    coeff = (m * k - 1) ** (n - 1)
    rhs_sq = coeff**2 * q ** (n - 2)
    sharper = err * err <= (m - 1) ** (2 * (n - 1)) * q ** (n - 2)
    return BoundVerdict("infinity_deligne", err * err, rhs_sq,
                        tightness(err, [(coeff * q ** ((n - 2) // 2), q ** ((n - 2) % 2))]),
                        hypothesis_violation=not valid, aux={"sharper_degree_m": sharper})


def nstar_main_term(q: int, n: int) -> int:
    num = (q - 1) ** n - (-1) ** n
    quo, rem = divmod(num, q)
    if rem:
        raise AssertionError(f"q = {q} does not divide (q-1)^{n} - (-1)^{n}")
    return quo


def nstar_bound_terms(q: int, n: int, m: int, k: int) -> tuple[int, int]:
    """``(c, e)`` with the N* error bound equal to ``c * q^e * sqrt(q)``."""
    mk = m * k
    if n == 3:
        return 10 * mk**4 * q, 1
    if n == 4:
        return 10 * mk**4 * q**2, 2
    return 11 * mk ** (n - 1) * q ** (n - 2), n - 2


def verdict_nstar(q: int, n: int, m: int, k: int, N_star: int, valid: bool = True) -> BoundVerdict:
    """``|N* - ((q-1)^n - (-1)^n)/q|`` against ``10 (mk)^4 q^(3/2)`` (n=3),
    ``10 (mk)^4 q^(5/2)`` (n=4) or ``11 (mk)^(n-1) q^(n-3/2)`` (n>=5)."""
    if n < 3:
        raise ValueError("N* estimate needs n >= 3")
    err = N_star - nstar_main_term(q, n)
    coeff, _ = nstar_bound_terms(q, n, m, k)
    return BoundVerdict("nstar", err * err, coeff**2 * q, tightness(err, [(coeff, q)]),
                        hypothesis_violation=not valid or math.gcd(m, q - 1) != 1)


def existence_threshold(n: int, m: int, k: int) -> ExistenceThreshold:
    """``22^2 (2mk)^(2n-2)`` for n >= 5, ``10^2 (mk)^8`` for n in {3, 4}."""
    if n < 3:
        raise ValueError("existence threshold needs n >= 3")
    mk = m * k
    t = 22**2 * (2 * mk) ** (2 * n - 2) if n >= 5 else 10**2 * mk**8
    return ExistenceThreshold(n, m, k, t)


def verdict_existence(q: int, n: int, m: int, k: int, N_star: int, valid: bool = True) -> BoundVerdict:
    """``q > threshold  =>  N* > 0``, encoded as ``q [N* = 0] <= threshold``."""
    t = existence_threshold(n, m, k).threshold
    lhs = q if N_star == 0 else 0
    return BoundVerdict("existence", lhs * lhs, t * t, format_ratio(lhs, t),
                        hypothesis_violation=not valid or math.gcd(m, q - 1) != 1)


def verdict_existence_chain(q: int, n: int, m: int, k: int, N_star: int,
                            valid: bool = True) -> BoundVerdict:
    """``N* >= (q-2)^n / q - 11 (mk)^(n-1) q^(n-3/2)`` (n >= 5).

    Times ``q``: ``(q-2)^n - q N* <= 11 (mk)^(n-1) q^(n-1) sqrt(q)``.
    """
    if n < 5:
        raise ValueError("lower-bound chain is stated for n >= 5")
    lhs = (q - 2) ** n - q * N_star
    coeff = 11 * (m * k) ** (n - 1) * q ** (n - 1)
    lhs_sq = lhs * lhs if lhs > 0 else 0
    return BoundVerdict("existence_chain", lhs_sq, coeff**2 * q,
                        tightness(max(lhs, 0), [(coeff, q)]),
                        hypothesis_violation=not valid or math.gcd(m, q - 1) != 1)


def identity_truncated_sum(q: int, n: int) -> bool:
    """Check the truncated alternating binomial identity and its full form.

    ``sum_{i=0}^{n-2} (-1)^i C(n,i) q^(n-i-1) = ((q-1)^n - (-1)^n)/q + (-1)^n n``
    in integers (empty sum for n = 1), and
    ``sum_{i=0}^{n} (-1)^i C(n,i) q^(n-i-1) = (q-1)^n / q`` in rationals.
    """
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    lhs = sum((-1) ** i * math.comb(n, i) * q ** (n - i - 1) for i in range(n - 1))
    num = (q - 1) ** n - (-1) ** n
    if num % q:
        return False
    rhs = num // q + (-1) ** n * n
    full = sum(Fraction((-1) ** i * math.comb(n, i) * q**n, q ** (i + 1)) for i in range(n + 1))
    return lhs == rhs and full == Fraction((q - 1) ** n, q)


def zero_level_sum_bijective(q: int, n: int) -> int:
    """``N^=`` when ``x -> x^m`` is a bijection of F_q and ``a != 0``:
    ``sum_{i=1}^{n-2} (-1)^(i+1) C(n,i) q^(n-i-1) + (-1)^n n``."""
    return (sum((-1) ** (i + 1) * math.comb(n, i) * q ** (n - i - 1) for i in range(1, n - 1))
            + (-1) ** n * n)


def betti_upper(n: int, d: int) -> tuple[int, int]:
    """``(ceil((d-1)((d-1)^n - (-1)^n)/d), (d-1)^n)``: the intermediate and
    coarse upper bounds on the primitive middle Betti number of a smooth
    degree-``d`` hypersurface."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    num = (d - 1) * ((d - 1) ** n - (-1) ** n)
    return -(-num // d), (d - 1) ** n
