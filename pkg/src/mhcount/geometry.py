"""Pointwise probes of the singular locus.

A singular point of ``V_f`` with a zero coordinate ``x_j`` must have a second
zero coordinate ``x_l`` and satisfy ``a + sum_{i != j,l} a_i x_i^m = 0``; one
with all coordinates nonzero must satisfy ``a_1 (n - km) x_1^m + a = 0`` and
``a_1 x_1^m = a_j x_j^m`` for ``j = 2, 3``.  The probes enumerate rational
singular points over ``F_{q^r}`` and check that each lands in one of these two
families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .budgets import Budgets, check_budget
from .field import build_field
from .model import (MHInstance, batch_g, batch_gradient, batch_prod, eval_fh_gradient,
                    point_chunks)

TWO_ZEROS = "TWO_ZEROS_Vj"
ALL_NONZERO = "ALL_NONZERO_W"
UNCLASSIFIED = "UNCLASSIFIED"


@dataclass(frozen=True)
class SingularPointRecord:
    point: tuple[int, ...]
    zero_coords: tuple[int, ...]
    classification: str
    field_ext_degree: int
    pair: tuple[int, int] | None = None

    def to_json(self) -> str:
        return json.dumps({
            "point_codes": list(self.point),
            "ext_degree": self.field_ext_degree,
            "zero_coords": list(self.zero_coords),
            "classification": self.classification if self.pair is None
            else f"{self.classification}({self.pair[0]},{self.pair[1]})",
        })


def over_extension(inst: MHInstance, r: int) -> MHInstance:
    """The instance over ``F_{q^r}``; ``r = 1`` returns it unchanged."""
    if r < 1:
        raise ValueError("extension degree must be positive")
    if r == 1:
        return inst
    if inst.coeff_int_spec is None:
        raise ValueError("probing an extension needs coefficients in the prime subfield")
    big = build_field(inst.ctx.p, inst.ctx.s * r, budget=max(10**6, inst.q**r))
    return inst.lift(big)


def in_two_zero_family(inst: MHInstance, x, j: int, l: int) -> bool:
    ctx = inst.ctx
    if x[j] != 0 or x[l] != 0:
        return False
    acc = inst.a
    for i, (ai, xi) in enumerate(zip(inst.a_coeffs, x)):
        if i not in (j, l):
            acc = ctx.add(acc, ctx.mul(ai, ctx.pow(xi, inst.m)))
    return acc == 0


def in_nonzero_family(inst: MHInstance, x) -> bool:
    ctx = inst.ctx
    a1x1 = ctx.mul(inst.a_coeffs[0], ctx.pow(x[0], inst.m))
    coeff = ctx.element(inst.n - inst.m * inst.k)
    if ctx.add(ctx.mul(coeff, a1x1), inst.a) != 0:
        return False
    return all(ctx.mul(inst.a_coeffs[j], ctx.pow(x[j], inst.m)) == a1x1 for j in (1, 2))


def classify(inst: MHInstance, x, r: int = 1) -> SingularPointRecord:
    zeros = tuple(j for j, xj in enumerate(x) if xj == 0)
    if len(zeros) >= 2:
        for a_idx, j in enumerate(zeros):
            for l in zeros[a_idx + 1:]:
                if in_two_zero_family(inst, x, j, l):
                    return SingularPointRecord(tuple(x), zeros, TWO_ZEROS, r, (j, l))
    elif not zeros and in_nonzero_family(inst, x):
        return SingularPointRecord(tuple(x), zeros, ALL_NONZERO, r)
    return SingularPointRecord(tuple(x), zeros, UNCLASSIFIED, r)


def singular_points_raw(inst: MHInstance, budget: int | None = None) -> list[tuple[int, ...]]:
    """All points of F_q^n with ``f = 0`` and vanishing gradient, sorted."""
    budget = Budgets.from_env().probe_points if budget is None else budget
    check_budget("singular point scan", inst.q**inst.n, budget)
    ctx = inst.ctx
    found = []
    for coords in point_chunks(inst.q, inst.n):
        g = batch_g(inst, coords)
        f = ctx.vsub(ctx.vpow(g, inst.k), ctx.vmul(inst.b, batch_prod(ctx, coords)))
        hit = f == 0
        if not hit.any():
            continue
        sub = coords[:, hit]
        grad = batch_gradient(inst, sub, g[hit])
        sing = ~grad.any(axis=0)
        found.extend(tuple(int(v) for v in col) for col in sub[:, sing].T)
    return sorted(found)


def enumerate_singular_points(inst: MHInstance, r: int = 1,
                              budget: int | None = None) -> list[SingularPointRecord]:
    big = over_extension(inst, r)
    return [classify(big, x, r) for x in singular_points_raw(big, budget)]


def projective_points(q: int, n: int):
    """Normalized representatives of P^{n-1}(F_q) as ``(n, B)`` chunks.

    The first nonzero coordinate is 1.
    """
    for lead in range(n):
        tail = n - lead - 1
        for chunk in point_chunks(q, tail):
            pts = np.zeros((n, chunk.shape[1]), dtype=np.int64)
            pts[lead] = 1
            pts[lead + 1:] = chunk
            yield pts


def _infinity_points(inst: MHInstance, budget: int | None):
    budget = Budgets.from_env().probe_points if budget is None else budget
    check_budget("infinity scan", inst.q ** (inst.n - 1) * 2, budget)
    ctx = inst.ctx
    powm = ctx.power_table(inst.m)
    for pts in projective_points(inst.q, inst.n):
        acc = np.zeros(pts.shape[1], dtype=np.int64)
        for ai, xi in zip(inst.a_coeffs, pts):
            acc = ctx.vadd(acc, ctx.vmul(ai, powm[xi]))
        on = pts[:, acc == 0]
        if on.shape[1]:
            yield on


def infinity_points(inst: MHInstance, r: int = 1, budget: int | None = None) -> list[tuple[int, ...]]:
    """Projective F_{q^r}-points of ``a_1 X_1^m + ... + a_n X_n^m = 0``."""
    big = over_extension(inst, r)
    return sorted(tuple(int(v) for v in col)
                  for pts in _infinity_points(big, budget) for col in pts.T)


def check_infinity_nonsingular(inst: MHInstance, r: int = 1,
                               budget: int | None = None) -> tuple[bool, list[tuple[int, ...]]]:
    """Every point at infinity has a nonzero gradient ``(m a_j x_j^(m-1))_j``.

    Returns ``(ok, violations)``.
    """
    big = over_extension(inst, r)
    ctx = big.ctx
    powm1 = ctx.power_table(big.m - 1)
    violations = []
    for pts in _infinity_points(big, budget):
        grad = np.stack([ctx.vmul(ctx.mul(ctx.element(big.m), ai), powm1[xi])
                         for ai, xi in zip(big.a_coeffs, pts)])
        bad = ~grad.any(axis=0)
        violations.extend(tuple(int(v) for v in col) for col in pts[:, bad].T)
    violations.sort()
    return not violations, violations


def check_pcl_no_singular_at_infinity(inst: MHInstance, r: int = 1, budget: int | None = None,
                                      witnesses: list | None = None) -> bool:
    """No point ``(0 : x)`` of the projective closure has a vanishing
    ``(n+1)``-gradient of the homogenization.

    Points with vanishing gradient are appended to ``witnesses`` if given.
    """
    big = over_extension(inst, r)
    ok = True
    for pts in _infinity_points(big, budget):
        for col in pts.T:
            x = tuple(int(v) for v in col)
            if not any(eval_fh_gradient(big, 0, x)):
                ok = False
                if witnesses is not None:
                    witnesses.append(x)
    return ok


@dataclass
class ProbeSummary:
    ext_degree: int
    singular_points: int
    unclassified: int
    one_zero: int
    infinity_points: int
    infinity_nonsingular: bool
    pcl_no_singular_at_infinity: bool

    @property
    def ok(self) -> bool:
        return (self.unclassified == 0 and self.one_zero == 0 and self.infinity_nonsingular
                and self.pcl_no_singular_at_infinity)


def probe(inst: MHInstance, r: int = 1, budget: int | None = None) -> tuple[ProbeSummary, list]:
    records = enumerate_singular_points(inst, r, budget)
    inf_ok, _ = check_infinity_nonsingular(inst, r, budget)
    summary = ProbeSummary(
        ext_degree=r,
        singular_points=len(records),
        unclassified=sum(rec.classification == UNCLASSIFIED for rec in records),
        one_zero=sum(len(rec.zero_coords) == 1 for rec in records),
        infinity_points=len(infinity_points(inst, r, budget)),
        infinity_nonsingular=inf_ok,
        pcl_no_singular_at_infinity=check_pcl_no_singular_at_infinity(inst, r, budget),
    )
    return summary, records
