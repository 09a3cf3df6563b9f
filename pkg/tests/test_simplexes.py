import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from minkmap.errors import DegenerateSimplex, InvalidDimension, InvalidProjectiveFrame
from minkmap.exact import Mat
from minkmap.simplexes import (
    RatSimplex,
    UniSimplex,
    barycentric,
    barycenter,
    base_matrices,
    contains,
    cylinder_frames,
    diameter,
    farey_cylinder,
    mesh,
    simplex_lebesgue,
    simplex_record,
    standard_simplex,
    tent_cylinder,
    word_product,
)

from oracles import farey_vertex_sets


def words(t):
    return [format(k, f"0{t}b") if t else "" for k in range(2**t)]


def test_base_matrices_entries_n2():
    b = base_matrices(2)
    assert b.V.rows == ((0, 1, 1), (0, 1, 0), (1, 1, 1))
    assert b.A0.rows == ((1, 0, 1), (0, 0, 1), (0, 1, 0))
    assert b.A1.rows == ((0, 0, 1), (1, 0, 1), (0, 1, 0))
    assert b.B0.rows == ((1, 0, F(1, 2)), (0, 0, F(1, 2)), (0, 1, 0))
    assert b.B1.rows == ((0, 0, F(1, 2)), (1, 0, F(1, 2)), (0, 1, 0))


def test_base_matrices_entries_n1():
    b = base_matrices(1)
    assert b.V.rows == ((0, 1), (1, 1))
    assert b.A0.rows == ((1, 1), (0, 1))
    assert b.A1.rows == ((0, 1), (1, 1))


def test_base_matrices_rejects_dimension_zero():
    with pytest.raises(InvalidDimension):
        base_matrices(0)


def test_standard_simplex_is_order_simplex():
    for n in (1, 2, 3, 4):
        vs = standard_simplex(n).vertices
        assert vs[0] == tuple(F(0) for _ in range(n))
        for v in vs:
            assert all(a >= b for a, b in zip(v, v[1:]))
            assert v[0] <= 1 and v[-1] >= 0


def test_farey_cylinder_examples():
    assert farey_cylinder(2, "").vertices == ((F(0), F(0)), (F(1), F(1)), (F(1), F(0)))
    assert set(farey_cylinder(2, "0").vertices) == {
        (F(0), F(0)),
        (F(1), F(0)),
        (F(1, 2), F(1, 2)),
    }
    pts = {v[0] for v in farey_cylinder(1, "00").vertices}
    assert pts == {F(0), F(1, 3)}


def test_farey_depth2_vertices_match_classical_construction():
    # depth-2 cylinder endpoints are exactly the classical second mediant set
    expected = farey_vertex_sets(2)[2]
    got = set()
    for w in words(2):
        got |= {v[0] for v in farey_cylinder(1, w).vertices}
    assert got == expected == {F(0), F(1, 3), F(1, 2), F(2, 3), F(1)}


def test_tent_cylinder_examples():
    assert set(tent_cylinder(2, "0").vertices) == set(farey_cylinder(2, "0").vertices)
    assert {v[0] for v in tent_cylinder(1, "01").vertices} == {F(1, 4), F(1, 2)}
    assert simplex_lebesgue(tent_cylinder(2, "00")) == F(1, 4)


def test_tent_measures_are_dyadic_powers():
    for n in (1, 2, 3):
        for t in range(7):
            for w, frame in cylinder_frames(n, t, "tent"):
                vs = [tuple(F(frame.rows[i][j], frame.rows[n][j]) for i in range(n))
                      for j in range(n + 1)]
                assert simplex_lebesgue(RatSimplex(tuple(vs))) == F(1, 2**t)


def test_partition_sums_to_one_exactly():
    for n in (1, 2, 3, 4):
        for t in range(11):
            total_farey = F(0)
            total_tent = F(0)
            for _, frame in cylinder_frames(n, t, "farey"):
                total_farey += simplex_lebesgue(UniSimplex(frame))
            for _, frame in cylinder_frames(n, t, "tent"):
                vs = tuple(
                    tuple(F(frame.rows[i][j], frame.rows[n][j]) for i in range(n))
                    for j in range(n + 1)
                )
                total_tent += simplex_lebesgue(RatSimplex(vs))
            assert total_farey == 1
            assert total_tent == 1


def test_diameter_examples():
    assert diameter(standard_simplex(2)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert diameter(standard_simplex(1)) == 1.0
    assert diameter([(F(1, 3), F(1, 3))] * 3) == 0.0  # collapsed: raw vertices only


def test_barycentric_examples():
    s = standard_simplex(2)
    v1 = s.vertices[0]
    assert barycentric(v1, s) == (1, 0, 0)
    assert barycentric((F(2, 3), F(1, 3)), s) == (F(1, 3), F(1, 3), F(1, 3))
    assert barycentric((F(1, 2), F(1, 4)), s) == (F(1, 2), F(1, 4), F(1, 4))


def test_barycentric_rejects_degenerate():
    with pytest.raises(DegenerateSimplex):
        barycentric((F(0), F(0)), [(F(0), F(0)), (F(1), F(1)), (F(2), F(2))])


@given(st.integers(2, 60), st.integers(0, 60), st.integers(0, 60))
def test_barycentric_reconstructs_point(den, a, b):
    x1 = F(max(a, b), den * 2)
    x2 = F(min(a, b), den * 2)
    s = standard_simplex(2)
    alpha = barycentric((x1, x2), s)
    assert sum(alpha) == 1
    rec = tuple(
        sum(w * v[i] for w, v in zip(alpha, s.vertices)) for i in range(2)
    )
    assert rec == (x1, x2)
    assert contains(s, (x1, x2)) == all(w >= 0 for w in alpha)


def test_simplex_lebesgue_examples():
    assert simplex_lebesgue(standard_simplex(3)) == 1
    assert simplex_lebesgue(farey_cylinder(2, "0")) == F(1, 2)


def test_unisimplex_validates():
    with pytest.raises(InvalidProjectiveFrame):
        UniSimplex(Mat.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(InvalidProjectiveFrame):
        UniSimplex(Mat.from_rows([[0, 1], [-1, 1]]))


def test_ratsimplex_validates():
    with pytest.raises(DegenerateSimplex):
        RatSimplex(((F(0),), (F(0),)))


def test_every_farey_cylinder_is_unimodular():
    for n in (1, 2, 3):
        for t in range(7):
            for _, frame in cylinder_frames(n, t, "farey"):
                UniSimplex(frame)  # constructor asserts unimodularity


def test_nesting():
    for n in (1, 2, 3):
        for t in range(5):
            for w in words(t):
                for a in "01":
                    parent_f = farey_cylinder(n, w)
                    child_f = farey_cylinder(n, w + a)
                    assert all(contains(parent_f, v) for v in child_f.vertices)
                    parent_t = tent_cylinder(n, w)
                    child_t = tent_cylinder(n, w + a)
                    assert all(contains(parent_t, v) for v in child_t.vertices)


def test_mesh_decay():
    for n in (1, 2, 3):
        for side in ("farey", "tent"):
            meshes = [mesh(n, t, side) for t in range(8)]
            assert all(a >= b - 1e-13 for a, b in zip(meshes, meshes[1:]))
            # strict decrease over windows of length n
            for t in range(len(meshes) - n):
                assert meshes[t + n] < meshes[t]
            assert meshes[-1] < meshes[0]


def test_combinatorial_isomorphism_shared_faces():
    # shared vertices between two cylinders occur at exactly the same index
    # pairs on both sides
    for n in (2, 3):
        for t in (2, 4):
            farey_cols = {}
            tent_verts = {}
            for w, frame in cylinder_frames(n, t, "farey"):
                farey_cols[w] = UniSimplex(frame).proj_columns()
            for w, frame in cylinder_frames(n, t, "tent"):
                tent_verts[w] = tuple(
                    tuple(F(frame.rows[i][j], frame.rows[n][j]) for i in range(n))
                    for j in range(n + 1)
                )
            ws = sorted(farey_cols)
            for i, w1 in enumerate(ws):
                for w2 in ws[i + 1 :]:
                    shared_f = {
                        (a, b)
                        for a in range(n + 1)
                        for b in range(n + 1)
                        if farey_cols[w1][a] == farey_cols[w2][b]
                    }
                    shared_t = {
                        (a, b)
                        for a in range(n + 1)
                        for b in range(n + 1)
                        if tent_verts[w1][a] == tent_verts[w2][b]
                    }
                    assert shared_f == shared_t, (n, t, w1, w2)


def test_simplex_record_shape():
    rec = simplex_record(2, "01", "tent")
    assert rec["word"] == "01"
    assert rec["side"] == "tent"
    assert rec["measure"] == "1/4"
    assert len(rec["vertices"]) == 3
    assert all(len(v) == 2 for v in rec["vertices"])
    assert isinstance(rec["diameter"], float)


def test_word_product_validates():
    with pytest.raises(ValueError):
        word_product(2, "012", "farey")
    with pytest.raises(ValueError):
        word_product(2, "01", "other")
