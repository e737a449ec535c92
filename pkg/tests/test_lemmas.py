import json

import numpy as np
import pytest

from golden_codes.lemmas import (
    Cone,
    H2PathGeometry,
    LemmaReport,
    cone_contains,
    search_lemma_4d,
    verify_lemma_2d,
    verify_lemma_120cell,
)
from golden_codes.lemmas import _Star, _cone_from_star, _extreme_rays, _frame_to_j, _to_float_j

J = np.diag([-1.0, 1, 1, 1, 1])


@pytest.fixture(scope="module")
def star():
    return _Star()


def test_star_is_the_600cell_vertex_figure(star):
    assert star.nbrs.shape == (120, 5, 2)
    x = _to_float_j(star.nbrs)
    v0 = _to_float_j(star.v0)
    # every neighbour at the same distance, all distinct
    ch = -(x @ J @ v0)
    assert np.allclose(ch, ch[0])
    assert len({v.tobytes() for v in star.nbrs}) == 120


def test_frames_are_isometries(star):
    for k in (0, 5, 119):
        g = _frame_to_j(star.moves[k])
        assert np.allclose(g.T @ J @ g, J, atol=1e-9)
        assert np.allclose(g @ _to_float_j(star.v0), _to_float_j(star.nbrs[k]), atol=1e-9)


def test_base_cone_has_dodecahedral_section(star):
    nb, _ = star.neighbours(star.moves[0])
    apex = _to_float_j(star.nbrs[0])
    normals, de = _cone_from_star(apex, _to_float_j(star.v0), _to_float_j(nb))
    assert normals.shape == (119, 5)
    rays = _extreme_rays(apex, normals, de)
    assert len(rays) == 20


def _cones(star, k_outer, k_inner):
    out = []
    for k in (k_outer, k_inner):
        frame = star.moves[k]
        nb, _ = star.neighbours(frame)
        head = _to_float_j(star.nbrs[k])
        normals, de = _cone_from_star(head, _to_float_j(star.v0), _to_float_j(nb))
        rays = _extreme_rays(head, normals, de)
        out.append(Cone(apex=head, normals=list(normals), witnesses=list(head + rays) + [head], mode="float"))
    return out


@pytest.mark.parametrize("k", [0, 7])
def test_cone_contains_itself(star, k):
    c, _ = _cones(star, k, k)
    assert cone_contains(c, c) == "yes"


def test_witness_and_lp_answers_agree(star):
    for k_out, k_in in ((0, 1), (3, 0)):
        outer, inner = _cones(star, k_out, k_in)
        fast = cone_contains(outer, inner)
        lp = cone_contains(outer, Cone(inner.apex, inner.normals, None, "float"))
        assert fast == lp == "no"


def test_lp_path_proves_self_containment_in_2d():
    geo = H2PathGeometry(4, 5)
    c = geo.base_cone
    as_float = lambda v: np.array([float(x) for x in v])
    flat = Cone(as_float(c.apex), [as_float(n) for n in c.normals], None, "float")
    assert cone_contains(flat, flat) == "yes"


def test_mode_mismatch_raises():
    a = Cone(apex=np.zeros(3), normals=[], mode="float")
    b = Cone(apex=np.zeros(3), normals=[], mode="mp")
    with pytest.raises(ValueError):
        cone_contains(a, b)


def test_h2_geometry_rejects_flat_tilings():
    with pytest.raises(ValueError):
        H2PathGeometry(4, 4)


def test_lemma_2d_passes():
    rep = verify_lemma_2d()
    assert rep.passed and rep.counterexamples == []
    assert rep.details["undecided_tests"] == 0
    assert rep.details["primitive_non_minimal"] == {"len3->dist1": 1, "len4->dist2": 1}


def test_lemma_120cell_passes():
    rep = verify_lemma_120cell()
    assert rep.passed and rep.checked == 81_600
    assert rep.details["min_gap_S_minus_S_prime"] >= 1


def test_report_json_schema():
    rep = LemmaReport("x", 3, ["p"], True, {"a": 1})
    assert set(json.loads(rep.to_json())) == {"lemma", "checked", "counterexamples", "budget_exhausted"}
    assert not rep.passed and "FAIL" in rep.to_text()


@pytest.mark.parametrize("depth,frontier", [(2, {1: 1, 2: 1}), (3, {1: 1, 2: 1, 3: 5})])
def test_search_4d_small_depths_are_deterministic(depth, frontier):
    a = search_lemma_4d(max_len=depth, budget=10**6)
    b = search_lemma_4d(max_len=depth, budget=10**6)
    assert a.details == b.details and a.counterexamples == b.counterexamples
    assert a.details["frontier_by_depth"] == frontier
    assert a.details["second_edge_classes"] == 9
    # survivors at the requested length are reported, not hidden
    assert len(a.counterexamples) == frontier[depth]


def test_search_4d_budget_is_reported():
    rep = search_lemma_4d(max_len=8, budget=50)
    assert rep.budget_exhausted and not rep.counterexamples
    assert rep.details["work"] <= 50
