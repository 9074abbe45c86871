"""Markoff-Hurwitz instances ``(a_1 X_1^m + ... + a_n X_n^m + a)^k = b X_1...X_n``.

``f`` is the defining polynomial ``g^k - b X_1...X_n`` with diagonal part
``g = a_1 X_1^m + ... + a_n X_n^m + a``; ``fh`` is its homogenization with
respect to ``X_0``.  Points are tuples of field codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import FieldCtx, build_field


class HypothesisError(ValueError):
    """An instance violates the standing hypotheses in strict mode."""


@dataclass(frozen=True)
class MHInstance:
    ctx: FieldCtx
    m: int
    k: int
    a_coeffs: tuple[int, ...]
    a: int
    b: int
    strict: bool = True
    violations: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a_coeffs", tuple(int(c) for c in self.a_coeffs))
        for c in (*self.a_coeffs, self.a, self.b):
            if not 0 <= c < self.ctx.q:
                raise ValueError(f"coefficient code {c} is not in F_{self.ctx.q}")
        found = tuple(check_hypotheses(self.ctx.p, self.n, self.m, self.k,
                                       (*self.a_coeffs, self.a, self.b)))
        object.__setattr__(self, "violations", found)
        if self.strict and found:
            raise HypothesisError("; ".join(found))

    @property
    def n(self) -> int:
        return len(self.a_coeffs)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def degree(self) -> int:
        return self.m * self.k

    @property
    def coeff_int_spec(self) -> tuple[int, ...] | None:
        """Coefficients as integers mod p, when all lie in the prime subfield."""
        codes = (*self.a_coeffs, self.a, self.b)
        if all(c < self.ctx.p for c in codes):
            return codes
        return None

    @property
    def valid(self) -> bool:
        return not self.violations

    def key(self) -> tuple:
        return (self.ctx.p, self.ctx.s, self.n, self.m, self.k, self.a_coeffs, self.a, self.b)

    def lift(self, big: FieldCtx) -> MHInstance:
        """The same equation over an extension field, via the prime subfield."""
        spec = self.coeff_int_spec
        if spec is None:
            raise ValueError("coefficients outside the prime subfield cannot be lifted canonically")
        if big.p != self.ctx.p or big.s % self.ctx.s:
            raise ValueError(f"F_{big.q} does not extend F_{self.q}")
        return MHInstance(big, self.m, self.k, spec[:-2], spec[-2], spec[-1], strict=False)

    # -- serialization --------------------------------------------------------

    def to_record(self) -> str:
        """``p s n m k a1,...,an a b``"""
        coeffs = ",".join(str(c) for c in self.a_coeffs)
        return f"{self.ctx.p} {self.ctx.s} {self.n} {self.m} {self.k} {coeffs} {self.a} {self.b}"

    @classmethod
    def from_record(cls, line: str, strict: bool = True) -> MHInstance:
        parts = line.split()
        if len(parts) != 8:
            raise ValueError(f"expected 8 fields in instance record, got {len(parts)}: {line!r}")
        p, s, n, m, k = (int(x) for x in parts[:5])
        coeffs = tuple(int(x) for x in parts[5].split(","))
        if len(coeffs) != n:
            raise ValueError(f"record declares n={n} but lists {len(coeffs)} coefficients")
        return cls(build_field(p, s), m, k, coeffs, int(parts[6]), int(parts[7]), strict=strict)


def check_hypotheses(p: int, n: int, m: int, k: int, coeffs) -> list[str]:
    out = []
    if n < 3 or m < 2 or k < 2:
        out.append(f"need n >= 3, m >= 2, k >= 2 (got n={n}, m={m}, k={k})")
    if any(c == 0 for c in coeffs):
        out.append("a, b and every a_i must be nonzero")
    if (m * k) % p == 0:
        out.append(f"characteristic {p} divides mk = {m * k}")
    if m * k <= n:
        out.append(f"need mk > n (mk = {m * k}, n = {n})")
    return out


def make_instance(p: int, s: int, m: int, k: int, a_coeffs, a: int = 1, b: int = 1,
                  strict: bool = True) -> MHInstance:
    return MHInstance(build_field(p, s), m, k, tuple(a_coeffs), a, b, strict=strict)


def all_ones(p: int, s: int, n: int, m: int, k: int, strict: bool = True) -> MHInstance:
    return make_instance(p, s, m, k, (1,) * n, 1, 1, strict=strict)


# -- scalar evaluation --------------------------------------------------------------

def _check_point(inst: MHInstance, x) -> None:
    if len(x) != inst.n:
        raise ValueError(f"point has {len(x)} coordinates, instance has n={inst.n}")


def eval_g(inst: MHInstance, x) -> int:
    _check_point(inst, x)
    ctx = inst.ctx
    acc = inst.a
    for ai, xi in zip(inst.a_coeffs, x):
        acc = ctx.add(acc, ctx.mul(ai, ctx.pow(xi, inst.m)))
    return acc


def _prod(ctx: FieldCtx, values) -> int:
    acc = 1
    for v in values:
        acc = ctx.mul(acc, v)
    return acc


def eval_f(inst: MHInstance, x) -> int:
    ctx = inst.ctx
    return ctx.sub(ctx.pow(eval_g(inst, x), inst.k), ctx.mul(inst.b, _prod(ctx, x)))


def eval_gradient(inst: MHInstance, x) -> tuple[int, ...]:
    """Partial derivatives ``km a_j x_j^(m-1) g^(k-1) - b prod_{i != j} x_i``."""
    ctx = inst.ctx
    gk1 = ctx.pow(eval_g(inst, x), inst.k - 1)
    km = ctx.element(inst.k * inst.m)
    out = []
    for j in range(inst.n):
        first = ctx.mul(ctx.mul(km, inst.a_coeffs[j]), ctx.mul(ctx.pow(x[j], inst.m - 1), gk1))
        rest = _prod(ctx, (x[i] for i in range(inst.n) if i != j))
        out.append(ctx.sub(first, ctx.mul(inst.b, rest)))
    return tuple(out)


def _form(inst: MHInstance, x0: int, x) -> int:
    # a_1 x_1^m + ... + a_n x_n^m + a x_0^m
    ctx = inst.ctx
    acc = ctx.mul(inst.a, ctx.pow(x0, inst.m))
    for ai, xi in zip(inst.a_coeffs, x):
        acc = ctx.add(acc, ctx.mul(ai, ctx.pow(xi, inst.m)))
    return acc


def eval_fh(inst: MHInstance, x0: int, x) -> int:
    _check_point(inst, x)
    ctx = inst.ctx
    e = inst.degree - inst.n
    if e < 0:
        raise ValueError("homogenization needs mk >= n")
    mono = ctx.mul(ctx.pow(x0, e), _prod(ctx, x))
    return ctx.sub(ctx.pow(_form(inst, x0, x), inst.k), ctx.mul(inst.b, mono))


def eval_fh_gradient(inst: MHInstance, x0: int, x) -> tuple[int, ...]:
    """All ``n + 1`` partials of ``fh``, ``d/dX_0`` first.  Uses ``0^0 = 1``."""
    _check_point(inst, x)
    ctx = inst.ctx
    m, k, n = inst.m, inst.k, inst.n
    e = inst.degree - n
    if e < 0:
        raise ValueError("homogenization needs mk >= n")
    km = ctx.element(k * m)
    gk1 = ctx.pow(_form(inst, x0, x), k - 1)
    prod_x = _prod(ctx, x)
    d0_mono = 0 if e == 0 else ctx.mul(ctx.element(e), ctx.mul(ctx.pow(x0, e - 1), prod_x))
    d0 = ctx.sub(ctx.mul(ctx.mul(km, inst.a), ctx.mul(ctx.pow(x0, m - 1), gk1)),
                 ctx.mul(inst.b, d0_mono))
    out = [d0]
    x0e = ctx.pow(x0, e)
    for j in range(n):
        first = ctx.mul(ctx.mul(km, inst.a_coeffs[j]), ctx.mul(ctx.pow(x[j], m - 1), gk1))
        rest = ctx.mul(x0e, _prod(ctx, (x[i] for i in range(n) if i != j)))
        out.append(ctx.sub(first, ctx.mul(inst.b, rest)))
    return tuple(out)


# -- vectorized evaluation ------------------------------------------------------------

def point_chunks(q: int, n: int, start: int = 0, stop: int | None = None,
                 chunk: int = 1 << 20, alphabet=None):
    """Yield ``(n, B)`` coordinate arrays covering points ``start..stop``.

    Points are numbered in lexicographic order, first coordinate most
    significant.  ``alphabet`` restricts every coordinate to the given codes
    (numbering is then over ``len(alphabet)**n`` points).
    """
    base = q if alphabet is None else len(alphabet)
    total = base**n
    stop = total if stop is None else min(stop, total)
    alpha = None if alphabet is None else np.asarray(alphabet, dtype=np.int64)
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        coords = np.empty((n, len(idx)), dtype=np.int64)
        for j in range(n - 1, -1, -1):
            idx, r = np.divmod(idx, base)
            coords[j] = r if alpha is None else alpha[r]
        yield coords


def batch_g(inst: MHInstance, coords: np.ndarray) -> np.ndarray:
    ctx = inst.ctx
    powm = ctx.power_table(inst.m)
    acc = np.full(coords.shape[1], inst.a, dtype=np.int64)
    for ai, xi in zip(inst.a_coeffs, coords):
        acc = ctx.vadd(acc, ctx.vmul(ai, powm[xi]))
    return acc


def batch_prod(ctx: FieldCtx, rows) -> np.ndarray:
    rows = list(rows)
    acc = np.ones(len(rows[0]) if rows else 0, dtype=np.int64)
    for r in rows:
        acc = ctx.vmul(acc, r)
    return acc


def batch_f(inst: MHInstance, coords: np.ndarray, g: np.ndarray | None = None) -> np.ndarray:
    ctx = inst.ctx
    if g is None:
        g = batch_g(inst, coords)
    return ctx.vsub(ctx.vpow(g, inst.k), ctx.vmul(inst.b, batch_prod(ctx, coords)))


def batch_gradient(inst: MHInstance, coords: np.ndarray, g: np.ndarray | None = None) -> np.ndarray:
    ctx = inst.ctx
    if g is None:
        g = batch_g(inst, coords)
    gk1 = ctx.vpow(g, inst.k - 1)
    powm1 = ctx.power_table(inst.m - 1)
    km = ctx.element(inst.k * inst.m)
    n = inst.n
    out = np.empty_like(coords)
    for j in range(n):
        first = ctx.vmul(ctx.vmul(ctx.mul(km, inst.a_coeffs[j]), powm1[coords[j]]), gk1)
        rest = batch_prod(ctx, (coords[i] for i in range(n) if i != j))
        out[j] = ctx.vsub(first, ctx.vmul(inst.b, rest))
    return out


def gcd_m_q1(inst: MHInstance) -> int:
    return math.gcd(inst.m, inst.q - 1)
