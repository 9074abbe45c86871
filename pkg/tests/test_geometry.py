import itertools

import numpy as np
import pytest
import sympy

from mhcount.field import build_field, subfield_embedding
from mhcount.geometry import (ALL_NONZERO, TWO_ZEROS, UNCLASSIFIED, check_infinity_nonsingular,
                              check_pcl_no_singular_at_infinity, classify,
                              enumerate_singular_points, infinity_points, probe,
                              projective_points, singular_points_raw)
from mhcount.model import all_ones, eval_f, eval_gradient, make_instance

INSTANCES = [(5, (1, 1, 1), 3, 2, 1, 1), (7, (1, 1, 1), 3, 2, 1, 1), (7, (2, 3, 5), 2, 2, 4, 6),
             (11, (1, 1, 1, 1), 3, 2, 1, 1), (13, (1, 2, 3), 3, 2, 7, 11)]


def make(case):
    p, coeffs, m, k, a, b = case
    return make_instance(p, 1, m, k, coeffs, a, b)


def loop_singular(inst):
    return sorted(x for x in itertools.product(range(inst.q), repeat=inst.n)
                  if eval_f(inst, x) == 0 and not any(eval_gradient(inst, x)))


@pytest.mark.parametrize("case", INSTANCES)
def test_singular_scan_matches_loop(case):
    inst = make(case)
    assert singular_points_raw(inst) == loop_singular(inst)


@pytest.mark.parametrize("case", INSTANCES)
def test_every_singular_point_classified(case):
    recs = enumerate_singular_points(make(case))
    assert all(r.classification != UNCLASSIFIED for r in recs)
    assert all(len(r.zero_coords) != 1 for r in recs)
    assert all(any(r.point) for r in recs)


def test_q5_singular_points():
    recs = enumerate_singular_points(all_ones(5, 1, 3, 3, 2))
    assert [r.point for r in recs] == [(0, 0, 4), (0, 4, 0), (4, 0, 0)]
    assert {r.classification for r in recs} == {TWO_ZEROS}
    assert recs[0].to_json() == ('{"point_codes": [0, 0, 4], "ext_degree": 1, '
                                 '"zero_coords": [0, 1], "classification": "TWO_ZEROS_Vj(0,1)"}')


def test_classify_rejects_one_zero():
    inst = all_ones(5, 1, 3, 3, 2)
    assert classify(inst, (0, 1, 1)).classification == UNCLASSIFIED


def test_nonzero_family_hit():
    # find an all-nonzero singular point by scanning and check its label
    for p in (7, 11, 13, 17, 19):
        for m, k in ((2, 2), (2, 3), (3, 2)):
            if (m * k) % p == 0:
                continue
            inst = all_ones(p, 1, 3, m, k)
            nz = [r for r in enumerate_singular_points(inst) if not r.zero_coords]
            if nz:
                assert {r.classification for r in nz} == {ALL_NONZERO}
                return
    pytest.skip("no all-nonzero singular point in the scanned range")


def test_projective_points_count():
    for q, n in ((2, 3), (5, 3), (4, 2)):
        pts = np.concatenate(list(projective_points(q, n)), axis=1).T.tolist()
        assert len(pts) == sum(q**i for i in range(n))
        assert all(next(v for v in pt if v) == 1 for pt in pts)


def test_infinity_q5():
    inst = all_ones(5, 1, 3, 3, 2)
    pts = infinity_points(inst)
    assert len(pts) == 6
    assert check_infinity_nonsingular(inst) == (True, [])


def test_infinity_check_catches_char_dividing_m():
    inst = make_instance(5, 1, 5, 2, (1, 1, 1), strict=False)
    ok, bad = check_infinity_nonsingular(inst)
    assert not ok and len(bad) == len(infinity_points(inst))


def sympy_pcl_ok(inst):
    """Independent check: symbolic partials of the homogenization at x0 = 0."""
    p, n, m, k = inst.ctx.p, inst.n, inst.m, inst.k
    X = sympy.symbols(f"x0:{n + 1}")
    form = inst.a * X[0] ** m + sum(c * xi**m for c, xi in zip(inst.a_coeffs, X[1:]))
    fh = sympy.expand(form**k - inst.b * X[0] ** (m * k - n) * sympy.Mul(*X[1:]))
    grads = [sympy.Poly(sympy.diff(fh, v), *X) for v in X]
    ok = True
    for x in itertools.product(range(p), repeat=n):
        if not any(x) or next(v for v in x if v) != 1:
            continue
        if sum(c * xi**m for c, xi in zip(inst.a_coeffs, x)) % p:
            continue
        if all(g.eval((0, *x)) % p == 0 for g in grads):
            ok = False
    return ok


@pytest.mark.parametrize("case", INSTANCES)
def test_pcl_check_matches_sympy(case):
    inst = make(case)
    assert check_pcl_no_singular_at_infinity(inst) == sympy_pcl_ok(inst)


def test_pcl_singular_at_infinity_q5():
    # at x0 = 0 each partial has a factor x0 or (sum a_i x_i^m)^(k-1) once mk - n >= 2
    inst = all_ones(5, 1, 3, 3, 2)
    wit = []
    assert not check_pcl_no_singular_at_infinity(inst, witnesses=wit)
    assert sorted(wit) == [(0, 1, 4), (1, 0, 4), (1, 1, 2), (1, 2, 1), (1, 3, 3), (1, 4, 0)]


def test_pcl_nonsingular_when_mk_is_n_plus_one():
    assert check_pcl_no_singular_at_infinity(all_ones(7, 1, 3, 2, 2))


def test_extension_probe_contains_base_points():
    inst = all_ones(5, 1, 3, 3, 2)
    base = {r.point for r in enumerate_singular_points(inst, 1)}
    big = {r.point for r in enumerate_singular_points(inst, 2)}
    emb = subfield_embedding(build_field(5), build_field(5, 2))
    assert {tuple(int(emb[c]) for c in pt) for pt in base} <= big
    summary, recs = probe(inst, 2)
    assert summary.unclassified == 0 and summary.one_zero == 0
    assert summary.singular_points == len(recs) == 9
    assert summary.infinity_points == 36
