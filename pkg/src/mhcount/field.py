"""Finite fields F_{p^s} at desk scale.

Elements are integer codes in ``[0, q)``: the code of ``c_0 + c_1 X + ... +
c_{s-1} X^{s-1}`` is ``c_0 + c_1 p + ... + c_{s-1} p^{s-1}``.  Codes below ``p``
are exactly the prime subfield, so an integer ``c mod p`` has the same code in
every extension of ``F_p``.

Scalar operations are methods on :class:`FieldCtx`; the ``v*`` methods are the
numpy-vectorized counterparts used by the counting engines.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

DEFAULT_FIELD_BUDGET = 10**6

# Extension fields up to this size get full q x q add/mul tables for the
# vectorized path; larger ones go through digits and discrete logs.
_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over Z_p as ascending coefficient lists ----------------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _zp_rem(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim(list(f))
    inv_lc = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg:
        c = f[-1] * inv_lc % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _zp_mulmod(f: list[int], g: list[int], modulus: list[int], p: int) -> list[int]:
    prod = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                prod[i + j] = (prod[i + j] + fi * gj) % p
    return _zp_rem(prod, modulus, p)


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..s//2."""
    s = len(modulus) - 1
    if s == 1:
        return True
    f = list(modulus)
    for d in range(1, s // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _zp_rem(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``s``.

    Coefficients are compared low degree first.  For ``s == 1`` the modulus
    is ``X`` by convention, so that codes are plain residues.
    """
    if s == 1:
        return (0, 1)
    # itertools.product varies its first slot slowest, so c_0 is the most
    # significant key as required.
    for low in itertools.product(range(1, p), *[range(p)] * (s - 1)):
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {s} over F_{p}")


class FieldCtx:
    """An immutable finite field with eager discrete-log tables.

    Build instances with :func:`build_field`; construction is cached per
    ``(p, s)``.
    """

    def __init__(self, p: int, s: int, modulus: tuple[int, ...]):
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = modulus
        self._place = [p**i for i in range(s)]
        self.generator, exp_table = self._find_generator()
        q = self.q
        self.exp = np.array(exp_table, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[self.exp] = np.arange(q - 1, dtype=np.int64)
        self.log = log
        self._exp_list = exp_table
        self._log_list = log.tolist()
        if s > 1:
            self._digits = np.array(
                [[(c // pl) % p for pl in self._place] for c in range(q)], dtype=np.int64
            ) if q <= 1 << 16 else None
        self._add_table = None
        self._mul_table = None
        if s > 1 and q <= _TABLE_LIMIT:
            codes = np.arange(q, dtype=np.int64)
            self._add_table = self._vadd_digits(codes[:, None], codes[None, :])
            self._mul_table = self._vmul_logs(codes[:, None], codes[None, :])

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, s={self.s}, modulus={self.modulus})"

    def __eq__(self, other):
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return (self.p, self.s, self.modulus) == (other.p, other.s, other.modulus)

    def __hash__(self):
        return hash((self.p, self.s, self.modulus))

    def __reduce__(self):
        return build_field, (self.p, self.s, max(DEFAULT_FIELD_BUDGET, self.q))

    # -- representation ----------------------------------------------------

    def to_coeffs(self, code: int) -> tuple[int, ...]:
        self._check(code)
        out = []
        for _ in range(self.s):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.s:
            raise FieldError(f"expected {self.s} coefficients, got {len(coeffs)}")
        code = 0
        for c in reversed(coeffs):
            if not 0 <= c < self.p:
                raise FieldError(f"coefficient {c} outside [0, {self.p})")
            code = code * self.p + c
        return code

    def element(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def elements(self) -> list[int]:
        return list(range(self.q))

    def _check(self, code):
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} is not an element of F_{self.q}")

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        p, out, pl = self.p, 0, 1
        for _ in range(self.s):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * pl
            pl *= p
        return out

    def neg(self, a: int) -> int:
        if self.s == 1:
            return -a % self.p
        p, out, pl = self.p, 0, 1
        for _ in range(self.s):
            a, ra = divmod(a, p)
            out += (-ra % p) * pl
            pl *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.s == 1:
            return a * b % self.p
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp_list[-self._log_list[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; negative exponents invert first."""
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no discrete logarithm")
        return self._log_list[a]

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        return (self.q - 1) // math.gcd(self._log_list[a], self.q - 1)

    # -- vectorized arithmetic on int64 code arrays -------------------------

    def _vadd_digits(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self._digits is not None:
            return ((self._digits[a] + self._digits[b]) % self.p) @ np.array(self._place, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for pl in self._place:
            out += (((a // pl) + (b // pl)) % self.p) * pl
        return out

    def _vneg_digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for pl in self._place:
            out += (-(a // pl) % self.p) * pl
        return out

    def _vmul_logs(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        zero = (a == 0) | (b == 0)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where(zero, 0, out)

    def vadd(self, a, b):
        if self.s == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._vadd_digits(a, b)

    def vneg(self, a):
        if self.s == 1:
            return -np.asarray(a) % self.p
        return self._vneg_digits(a)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.s == 1:
            return np.asarray(a) * np.asarray(b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b]
        return self._vmul_logs(a, b)

    def vpow(self, a, e: int):
        """Elementwise ``a**e`` for a fixed integer exponent ``e >= 0``."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones(a.shape, dtype=np.int64)
        out = self.exp[(self.log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def power_table(self, e: int) -> np.ndarray:
        """``table[x] = x**e`` for every code ``x``."""
        return self.vpow(np.arange(self.q, dtype=np.int64), e)

    # -- construction helpers ----------------------------------------------

    def _poly_of(self, code):
        return _trim(list(self.to_coeffs(code)))

    def _code_of(self, poly):
        poly = list(poly) + [0] * (self.s - len(poly))
        return self.from_coeffs(poly)

    def _find_generator(self):
        q, p, s = self.q, self.p, self.s
        if q == 2:
            return 1, [1]
        factors = prime_factors(q - 1)
        mod = list(self.modulus)

        def mulmod(a, b):
            if s == 1:
                return a * b % p
            return self._code_of(_zp_mulmod(self._poly_of(a), self._poly_of(b), mod, p))

        def powmod(a, e):
            r = 1
            while e:
                if e & 1:
                    r = mulmod(r, a)
                a = mulmod(a, a)
                e >>= 1
            return r

        for g in range(1, q):
            if all(powmod(g, (q - 1) // ell) != 1 for ell in factors):
                table = [1]
                for _ in range(q - 2):
                    table.append(mulmod(table[-1], g))
                return g, table
        raise AssertionError(f"F_{q} has no generator")


@lru_cache(maxsize=None)
def _build_field_cached(p: int, s: int) -> FieldCtx:
    modulus = smallest_irreducible(p, s)
    if not is_irreducible(modulus, p):
        raise AssertionError("modulus search returned a reducible polynomial")
    return FieldCtx(p, s, modulus)


def build_field(p: int, s: int = 1, budget: int = DEFAULT_FIELD_BUDGET) -> FieldCtx:
    """Construct ``F_{p^s}``.

    The modulus is the lexicographically smallest monic irreducible (low
    degree first) and the generator is the smallest code of order ``q - 1``.

    >>> build_field(2, 2).modulus
    (1, 1, 1)
    >>> build_field(7).generator
    3
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p!r} is not prime")
    if not isinstance(s, int) or s < 1:
        raise FieldError(f"extension degree must be a positive integer, got {s!r}")
    if p**s > budget:
        raise FieldError(f"q = {p}^{s} = {p**s} exceeds the field budget {budget}")
    return _build_field_cached(p, s)


def mth_power_root_count(ctx: FieldCtx, m: int, v: int) -> int:
    """Number of ``x`` in the field with ``x**m == v``."""
    if m < 1:
        raise ValueError("m must be positive")
    if v == 0:
        return 1
    d = math.gcd(m, ctx.q - 1)
    return d if ctx.dlog(v) % d == 0 else 0


def subfield_embedding(small: FieldCtx, big: FieldCtx) -> np.ndarray:
    """Code map ``F_{p^s} -> F_{p^t}`` for ``s | t``.

    Sends the generator ``X`` of the small field's polynomial basis to the
    smallest-code root of its modulus in the big field.
    """
    if small.p != big.p or big.s % small.s:
        raise FieldError(f"F_{small.q} is not a subfield of F_{big.q}")
    if small.s == 1:
        return np.arange(small.q, dtype=np.int64)
    codes = np.arange(big.q, dtype=np.int64)
    acc = np.zeros(big.q, dtype=np.int64)
    for c in reversed(small.modulus):
        acc = big.vadd(big.vmul(acc, codes), np.full(big.q, c, dtype=np.int64))
    roots = np.flatnonzero(acc == 0)
    if len(roots) == 0:
        raise AssertionError("modulus of the subfield has no root in the extension")
    alpha = int(roots[0])
    out = np.zeros(small.q, dtype=np.int64)
    for code in range(small.q):
        val, apow = 0, 1
        for c in small.to_coeffs(code):
            val = big.add(val, big.mul(c, apow))
            apow = big.mul(apow, alpha)
        out[code] = val
    return out
