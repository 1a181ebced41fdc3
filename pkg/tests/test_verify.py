import json

import numpy as np
import pytest

from blockforge.construct import BlockingSet, lower_bound
from blockforge.errors import BudgetExceededError
from blockforge.expander import complete_graph
from blockforge.gf import field_create
from blockforge.linalg import (MatrixGF, projective_reps, quotient_map, rank,
                               subspace_count)
from blockforge.supply import supply_mds
from blockforge.verify import (blocks_affine, is_strong_blocking,
                               is_strong_blocking_sampled, minimum_size_search,
                               to_affine_blocking, improved_s1_bound)
from blockforge.construct import construct_cherry


def all_projective_points(fld, k):
    pts = np.hstack(list(projective_reps(fld, k))).T
    return BlockingSet.from_points(fld, pts, {"construction": "all"})


def hyperplane_points(fld, k):
    # all projective points with last coordinate zero: a single hyperplane
    pts = np.hstack(list(projective_reps(fld, k - 1))).T
    padded = np.hstack([pts, np.zeros((pts.shape[0], 1), dtype=np.int64)])
    return BlockingSet.from_points(fld, padded, {"construction": "hyperplane"})


def test_full_point_set_passes():
    for q, k, s in [(2, 3, 1), (3, 3, 2), (2, 4, 2)]:
        fld = field_create(q)
        rep = is_strong_blocking(all_projective_points(fld, k), s)
        assert rep.passed
        assert rep.subspaces_checked == subspace_count(k, s, q)


def test_hyperplane_fails_with_counterexample():
    fld = field_create(2)
    b = hyperplane_points(fld, 3)
    rep = is_strong_blocking(b, 1)
    assert not rep.passed
    ce = rep.counterexample
    assert ce is not None and ce.rank < 3 - 1
    # counterexample validity re-verified independently
    q_map = quotient_map(ce.subspace)
    images = fld.matmul_arr(q_map.data, b.points.T)
    inside = b.points[~images.any(axis=0)]
    got = rank(MatrixGF(fld, inside)) if inside.size else 0
    assert got == ce.rank < 2


def test_count_all_mode():
    fld = field_create(2)
    b = hyperplane_points(fld, 3)
    rep = is_strong_blocking(b, 1, count_all=True)
    assert not rep.passed
    assert rep.subspaces_checked == subspace_count(3, 1, 2)
    assert rep.counterexample_count == 6  # every hyperplane except b itself


def test_invalid_s():
    fld = field_create(2)
    b = all_projective_points(fld, 3)
    with pytest.raises(ValueError):
        is_strong_blocking(b, 0)
    with pytest.raises(ValueError):
        is_strong_blocking(b, 3)


def test_budget_error():
    fld = field_create(2)
    b = all_projective_points(fld, 3)
    with pytest.raises(BudgetExceededError):
        is_strong_blocking(b, 1, budget=3)


def test_shard_reports_identical_pass_and_fail():
    fld = field_create(5)
    good = construct_cherry(complete_graph(4), supply_mds(fld, 3, 4))
    bad = hyperplane_points(fld, 3)
    for b, s in [(good, 2), (bad, 1), (bad, 2)]:
        reports = [is_strong_blocking(b, s, jobs=j).to_dict() for j in (1, 2, 3, 5)]
        blobs = {json.dumps(r, sort_keys=True) for r in reports}
        assert len(blobs) == 1


def test_sampled_never_refutes_a_passing_set():
    fld = field_create(3)
    b = all_projective_points(fld, 3)
    rep = is_strong_blocking_sampled(b, 1, trials=200, seed=0)
    assert rep.passed and rep.subspaces_checked == 200


def test_sampled_finds_hyperplane_counterexample_fast():
    fld = field_create(2)
    b = hyperplane_points(fld, 3)
    rep = is_strong_blocking_sampled(b, 1, trials=500, seed=1)
    assert not rep.passed
    assert rep.subspaces_checked < 20  # failure density ~ 6/7


def test_sampled_deterministic():
    fld = field_create(3)
    b = all_projective_points(fld, 3)
    r1 = is_strong_blocking_sampled(b, 2, trials=50, seed=9)
    r2 = is_strong_blocking_sampled(b, 2, trials=50, seed=9)
    assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)


def test_exhaustive_and_sampled_agree():
    fld = field_create(5)
    good = construct_cherry(complete_graph(4), supply_mds(fld, 3, 4))
    assert is_strong_blocking(good, 2).passed
    assert is_strong_blocking_sampled(good, 2, trials=300, seed=3).passed


def test_to_affine_sizes():
    fld = field_create(5)
    b = construct_cherry(complete_graph(4), supply_mds(fld, 3, 4))
    aff = to_affine_blocking(b)
    assert aff.shape[0] == 4 * b.size + 1
    assert not aff[0].any()  # contains the origin


def test_to_affine_gf2():
    fld = field_create(2)
    b = all_projective_points(fld, 3)
    aff = to_affine_blocking(b)
    assert aff.shape[0] == b.size + 1  # one nonzero scalar


def test_affine_blocking_check():
    fld = field_create(5)
    b = construct_cherry(complete_graph(4), supply_mds(fld, 3, 4))
    aff = to_affine_blocking(b)
    ok, _ = blocks_affine(aff, fld, 3)  # codim-3 affine subspaces = points of F_5^3
    assert ok
    # removing the origin breaks blocking at the single point {0}
    ok2, ce = blocks_affine(aff[1:], fld, 3)
    assert not ok2 and ce["label"] == 0


def test_minimum_size_search_k2():
    fld = field_create(2)
    res = minimum_size_search(fld, 2, 1)
    assert res.exact and res.size == 3  # all of PG(1,2)


def test_minimum_size_search_k3():
    fld = field_create(2)
    res = minimum_size_search(fld, 3, 1)
    assert res.exact
    assert res.size >= lower_bound(2, 3, 1) == 6
    assert res.size == 6
    assert is_strong_blocking(res.blocking_set, 1).passed


def test_minimum_size_search_budget_zero():
    fld = field_create(2)
    res = minimum_size_search(fld, 3, 1, budget=0)
    assert not res.exact
    assert is_strong_blocking(res.blocking_set, 1).passed  # fallback is everything


def test_improved_bound_helper():
    assert improved_s1_bound(1.0, 2, 3) == 6
    assert improved_s1_bound(1.5, 4, 10) == 68  # ceil(1.5 * 5 * 9)
