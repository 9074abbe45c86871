"""Dense univariate polynomials over F_q and distinct-root counting.

The number of distinct roots of ``f`` in F_q is ``deg gcd(f, X^q - X)``; the
Frobenius residue ``X^q mod f`` is built by square-and-multiply so no
polynomial of degree ``q`` is ever formed.

Two paths are provided.  :class:`UniPoly` is the plain scalar type.  The
``batch_*`` functions run the same algorithm on a stack of same-degree
polynomials held in a ``(B, d + 1)`` int64 array of codes, which is what the
fast point counter uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldCtx


def _strip(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class UniPoly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def x(cls, ctx: FieldCtx) -> UniPoly:
        return cls(ctx, (0, 1))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        ctx, acc = self.ctx, 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def __add__(self, other: UniPoly) -> UniPoly:
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.add(out[i], c)
        return UniPoly(ctx, out)

    def __neg__(self) -> UniPoly:
        return UniPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other: UniPoly) -> UniPoly:
        ctx = self.ctx
        if self.is_zero() or other.is_zero():
            return UniPoly(ctx, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
        return UniPoly(ctx, out)

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        dg = other.degree
        quo = [0] * max(len(rem) - dg, 0)
        inv_lc = ctx.inv(other.lc())
        while len(rem) - 1 >= dg:
            c = ctx.mul(rem[-1], inv_lc)
            shift = len(rem) - 1 - dg
            quo[shift] = c
            for i, g in enumerate(other.coeffs):
                rem[shift + i] = ctx.sub(rem[shift + i], ctx.mul(c, g))
            rem = list(_strip(rem))
        return UniPoly(ctx, quo), UniPoly(ctx, rem)

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        inv = self.ctx.inv(self.lc())
        return UniPoly(self.ctx, [self.ctx.mul(c, inv) for c in self.coeffs])


def poly_add(f: UniPoly, g: UniPoly) -> UniPoly:
    return f + g


def poly_mul(f: UniPoly, g: UniPoly) -> UniPoly:
    return f * g


def poly_mod(f: UniPoly, g: UniPoly) -> UniPoly:
    return f % g


def poly_monic(f: UniPoly) -> UniPoly:
    return f.monic()


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm, normalizing at each step."""
    a, b = f.monic(), g.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a


def frobenius_power(f: UniPoly) -> UniPoly:
    """``X^q mod f``."""
    if f.degree < 1:
        raise ValueError("Frobenius residue needs a non-constant modulus")
    q = f.ctx.q
    x = UniPoly.x(f.ctx) % f
    result = x
    for bit in bin(q)[3:]:
        result = (result * result) % f
        if bit == "1":
            result = (result * x) % f
    return result


def distinct_root_count(f: UniPoly) -> int:
    """Number of distinct roots of ``f`` in its base field."""
    if f.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    if f.degree < 1:
        return 0
    h = frobenius_power(f) - UniPoly.x(f.ctx)
    return poly_gcd(f, h).degree


# -- batched path ---------------------------------------------------------------

def _degrees(a: np.ndarray) -> np.ndarray:
    """Row degrees of a coefficient stack; -1 for zero rows."""
    nz = a != 0
    width = a.shape[1]
    last = width - 1 - np.argmax(nz[:, ::-1], axis=1)
    return np.where(nz.any(axis=1), last, -1)


def batch_monic(ctx: FieldCtx, polys: np.ndarray) -> np.ndarray:
    """Divide each row by its leading coefficient; rows must be nonzero."""
    deg = _degrees(polys)
    lead = polys[np.arange(len(polys)), deg]
    inv = ctx.vpow(lead, ctx.q - 2)
    return ctx.vmul(polys, inv[:, None])


def _mulmod(ctx: FieldCtx, a: np.ndarray, b: np.ndarray, mod: np.ndarray) -> np.ndarray:
    # a, b: (B, d) residues; mod: (B, d + 1) monic.
    B, d = a.shape
    prod = np.zeros((B, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        ai = a[:, i : i + 1]
        prod[:, i : i + d] = ctx.vadd(prod[:, i : i + d], ctx.vmul(ai, b))
    return _reduce(ctx, prod, mod)


def _reduce(ctx: FieldCtx, prod: np.ndarray, mod: np.ndarray) -> np.ndarray:
    d = mod.shape[1] - 1
    low = mod[:, :d]
    for t in range(prod.shape[1] - 1, d - 1, -1):
        c = prod[:, t : t + 1]
        prod[:, t - d : t] = ctx.vsub(prod[:, t - d : t], ctx.vmul(c, low))
    return prod[:, :d].copy()


def batch_frobenius(ctx: FieldCtx, monic: np.ndarray) -> np.ndarray:
    """``X^q mod f`` for every row of a stack of monic degree-``d`` polynomials."""
    B, width = monic.shape
    d = width - 1
    if d < 1:
        raise ValueError("Frobenius residue needs a non-constant modulus")
    x = np.zeros((B, d + 1), dtype=np.int64)
    x[:, 1] = 1
    x = _reduce(ctx, x, monic) if d == 1 else x[:, :d]
    result = x.copy()
    for bit in bin(ctx.q)[3:]:
        result = _mulmod(ctx, result, result, monic)
        if bit == "1":
            result = _mulmod(ctx, result, x, monic)
    return result


def batch_gcd_degree(ctx: FieldCtx, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise ``deg gcd(f, g)``; ``f`` rows nonzero, ``g`` rows may be zero."""
    width = max(f.shape[1], g.shape[1])
    a = np.zeros((len(f), width), dtype=np.int64)
    b = np.zeros((len(f), width), dtype=np.int64)
    a[:, : f.shape[1]] = f
    b[:, : g.shape[1]] = g
    rows = np.arange(len(f))
    da, db = _degrees(a), _degrees(b)
    while True:
        # keep deg a >= deg b
        swap = db > da
        if swap.any():
            a[swap], b[swap] = b[swap].copy(), a[swap].copy()
            da[swap], db[swap] = db[swap], da[swap]
        active = db >= 0
        if not active.any():
            return da
        # one elimination step a -= (lc a / lc b) X^(da - db) b on active rows
        r = rows[active]
        shift = da[r] - db[r]
        c = ctx.vmul(a[r, da[r]], ctx.vpow(b[r, db[r]], ctx.q - 2))
        for j in range(width):
            col = j + shift
            ok = (col < width) & (j <= db[r])
            rr, cc = r[ok], col[ok]
            a[rr, cc] = ctx.vsub(a[rr, cc], ctx.vmul(c[ok], b[rr, j]))
        da[r] = _degrees(a[r])
        # rows where a vanished become (b, 0)
        dead = active & (da < 0)
        if dead.any():
            a[dead], b[dead] = b[dead].copy(), 0
            da[dead], db[dead] = db[dead], -1


def batch_distinct_root_counts(ctx: FieldCtx, polys: np.ndarray) -> np.ndarray:
    """Distinct root counts for a stack of polynomials of equal exact degree."""
    polys = np.asarray(polys, dtype=np.int64)
    if polys.ndim != 2 or polys.shape[1] < 2:
        raise ValueError("expected a (B, d + 1) stack with d >= 1")
    if np.any(polys[:, -1] == 0):
        raise ValueError("every row must have exact degree d")
    monic = batch_monic(ctx, polys)
    h = batch_frobenius(ctx, monic)
    if h.shape[1] < 2:
        h = np.concatenate([h, np.zeros((len(h), 1), dtype=np.int64)], axis=1)
    h[:, 1] = ctx.vsub(h[:, 1], np.ones(len(h), dtype=np.int64))
    return batch_gcd_degree(ctx, monic, h)
