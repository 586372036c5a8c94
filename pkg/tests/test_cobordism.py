import itertools

import numpy as np
import pytest

from conftest import folded_rhombus_curve
from rhombidome.cobordism import (
    ComponentTooShortError,
    NotClosedError,
    NotOnPivotCircleError,
    Replayer,
    apply_pivot,
    component_budget,
    pack,
    pentagon_split,
    planarize,
    reduce_to_rhombi,
    steinitz_order,
)
from rhombidome.curve import (
    IntegralCurve,
    component_plane,
    is_planar,
    random_integral_curve,
)


def max_prefix_norm(vectors, order):
    acc = np.zeros(vectors.shape[1])
    worst = 0.0
    for idx in order:
        acc = acc + vectors[idx]
        worst = max(worst, float(np.linalg.norm(acc)))
    return worst


# ---------------------------------------------------------------------------
# pivots


def test_apply_pivot_square_to_doubled_path(unit_square):
    new_curve, move = apply_pivot(unit_square, 0, 1, np.array([0.0, 1.0, 0.0]))
    assert move is not None and not move.degenerate
    assert np.allclose(new_curve.components[0][1], [0, 1, 0])
    # emitted rhombus is the original unit square
    assert np.allclose(move.rhombus.vertices,
                       [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]])
    move.rhombus.validate()


def test_apply_pivot_noop(unit_square):
    same, move = apply_pivot(unit_square, 0, 1, unit_square.components[0][1])
    assert move is None
    assert np.array_equal(same.components[0], unit_square.components[0])


def test_apply_pivot_rejects_off_circle(unit_square):
    with pytest.raises(NotOnPivotCircleError):
        apply_pivot(unit_square, 0, 1, np.array([1.5, 0.0, 0.0]))


# ---------------------------------------------------------------------------
# planarize


def test_planarize_identity_on_planar(unit_square):
    flat, moves = planarize(unit_square)
    assert moves == []
    assert np.array_equal(flat.components[0], unit_square.components[0])


def test_planarize_folded_rhombus():
    folded = folded_rhombus_curve()
    flat, moves = planarize(folded)
    assert is_planar(flat) is not None
    assert len(moves) <= 6  # C(4, 2)


def test_planarize_random_curves_within_budget():
    rng = np.random.default_rng(10)
    for trial in range(10):
        n = int(rng.integers(6, 15))
        curve = random_integral_curve(n, rng)
        flat, moves = planarize(curve)
        assert len(moves) <= n * (n - 1) // 2
        plane = component_plane(flat.components[0])
        assert plane is not None
        flat.validate()


def test_planarize_keeps_farthest_pair_fixed():
    rng = np.random.default_rng(11)
    curve = random_integral_curve(9, rng)
    from rhombidome.curve import farthest_vertex_pair

    iv, iw = farthest_vertex_pair(curve.components[0])
    flat, moves = planarize(curve)
    assert np.array_equal(flat.components[0][iv], curve.components[0][iv])
    assert np.array_equal(flat.components[0][iw], curve.components[0][iw])


def test_planarize_each_pivot_descends():
    # every move drops the pivoted vertex to at most its lower neighbour's
    # height, which is what the C(n, 2) budget rests on
    from rhombidome.cobordism import _best_plane_through
    from rhombidome.curve import farthest_vertex_pair

    rng = np.random.default_rng(16)
    for _ in range(5):
        curve = random_integral_curve(int(rng.integers(6, 14)), rng)
        comp = curve.components[0]
        iv, iw = farthest_vertex_pair(comp)
        plane = _best_plane_through(comp, iv, iw)
        _, moves = planarize(curve)
        work = comp.copy()
        n = len(work)
        for move in moves:
            heights = np.abs((work - plane.base) @ plane.normal)
            h_old = abs(float(np.dot(move.old_point - plane.base, plane.normal)))
            h_new = abs(float(np.dot(move.new_point - plane.base, plane.normal)))
            h_prev = heights[(move.vertex - 1) % n]
            h_next = heights[(move.vertex + 1) % n]
            # replacement height is bounded by the path predecessor, which is
            # one of the two neighbours; both sit at or below the old height
            assert h_new <= max(h_prev, h_next) + 1e-12
            assert h_new < h_old
            work[move.vertex] = move.new_point


# ---------------------------------------------------------------------------
# bounded-prefix ordering


def test_steinitz_identity_for_opposite_pair():
    vectors = np.array([[1.0, 0.0], [-1.0, 0.0]])
    assert list(steinitz_order(vectors)) == [0, 1]


def test_steinitz_cross_vectors_vs_exhaustive():
    vectors = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    order = steinitz_order(vectors)
    got = max_prefix_norm(vectors, order)
    best = min(max_prefix_norm(vectors, p)
               for p in itertools.permutations(range(4)))
    assert best <= np.sqrt(2.0) + 1e-12
    assert got <= 2.0 + 1e-9
    assert sorted(order) == [0, 1, 2, 3]


def test_steinitz_hexagon_vs_exhaustive():
    ang = np.pi / 3.0 * np.arange(6)
    vectors = np.column_stack([np.cos(ang), np.sin(ang)])
    order = steinitz_order(vectors)
    assert max_prefix_norm(vectors, order) <= 2.0 + 1e-9
    best = min(max_prefix_norm(vectors, p)
               for p in itertools.permutations(range(6)))
    assert best <= 2.0


def test_steinitz_rejects_open_chain():
    with pytest.raises(NotClosedError):
        steinitz_order(np.array([[1.0, 0.0], [0.0, 1.0]]))


def test_steinitz_fallback_searchers_directly():
    from rhombidome.cobordism import _beam_order, _dfs_order

    ang = np.pi / 6.0 * np.arange(12)
    vectors = np.column_stack([np.cos(ang), np.sin(ang)])
    for order in (_dfs_order(vectors, 2.0 + 1e-9, node_cap=1_000_000),
                  _beam_order(vectors, 2.0 + 1e-9, width=64)):
        assert order is not None
        assert sorted(order) == list(range(12))
        assert max_prefix_norm(vectors, order) <= 2.0 + 1e-9
    # an infeasible bound makes both searchers report failure
    assert _dfs_order(vectors, 0.5, node_cap=100_000) is None
    assert _beam_order(vectors, 0.5, width=64) is None


def test_steinitz_random_planar_curves():
    rng = np.random.default_rng(12)
    for _ in range(20):
        n = int(rng.integers(4, 20))
        curve = random_integral_curve(n, rng)
        flat, _ = planarize(curve)
        v = flat.components[0]
        plane = component_plane(v)
        basis = np.linalg.svd(np.eye(3) - np.outer(plane.normal, plane.normal))[0][:, :2]
        vecs = (np.roll(v, -1, axis=0) - v) @ basis
        order = steinitz_order(vecs)
        assert max_prefix_norm(vecs, order) <= 2.0 + 1e-9
        assert sorted(order) == list(range(n))


# ---------------------------------------------------------------------------
# pack


def test_pack_identity_when_already_packed(regular_pentagon):
    packed, moves = pack(regular_pentagon)
    assert moves == []


def test_pack_hexagon_boundary_case(regular_hexagon):
    packed, moves = pack(regular_hexagon)
    v = packed.components[0]
    assert float(np.max(np.linalg.norm(v - v[0], axis=1))) <= 2.0 + 1e-9


def test_pack_random_curves():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(6, 16))
        curve = random_integral_curve(n, rng)
        flat, _ = planarize(curve)
        packed, moves = pack(flat)
        v = packed.components[0]
        assert float(np.max(np.linalg.norm(v - v[0], axis=1))) <= 2.0 + 1e-9
        assert len(moves) <= n * (n - 1) // 2
        packed.validate()


def test_pack_requires_planar():
    folded = folded_rhombus_curve()
    with pytest.raises(ValueError):
        pack(folded)


def test_pack_permutes_the_edge_vectors():
    rng = np.random.default_rng(17)
    for _ in range(5):
        curve = random_integral_curve(int(rng.integers(6, 14)), rng)
        flat, _ = planarize(curve)
        packed, _ = pack(flat)
        before = np.roll(flat.components[0], -1, axis=0) - flat.components[0]
        after = np.roll(packed.components[0], -1, axis=0) - packed.components[0]
        # the packed curve's edges are the same vectors, reordered
        used = set()
        for vec in after:
            match = None
            for j, ref in enumerate(before):
                if j not in used and np.linalg.norm(vec - ref) < 1e-9:
                    match = j
                    break
            assert match is not None
            used.add(match)


# ---------------------------------------------------------------------------
# pentagon base case


def test_pentagon_split_regular(regular_pentagon):
    split = pentagon_split(regular_pentagon.components[0])
    assert split.fixes == []
    assert len(split.rhombi) == 2
    split.rhombi[0].validate()
    split.rhombi[1].validate()
    split.triangle.validate()
    # apex height above the pentagon plane matches the closed-form value
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    s = 0.5 * (golden + 1.0 + golden)
    area = np.sqrt(s * (s - golden) * (s - 1.0) * (s - golden))
    circum = golden * golden / (4.0 * area)
    want = np.sqrt(1.0 - circum * circum)
    assert abs(split.apex[2]) == pytest.approx(want, abs=1e-6)
    assert abs(split.apex[2]) == pytest.approx(0.5257311121, abs=1e-6)


def test_pentagon_split_flat_triangle_needs_fixes():
    # pentagon with |v0 v2| = |v0 v3| = 1.95: circumradius(v0, v2, v3) > 1
    leg = 1.95
    v0 = np.array([0.0, 0.0, 0.0])
    v2 = np.array([leg, 0.5, 0.0])
    v2 = v0 + leg * v2 / np.linalg.norm(v2)
    # rotate v2 about v0 so that |v2 v3| = 1 with |v0 v3| = leg
    gamma = 2.0 * np.arcsin(0.5 / leg)
    rot = np.array([[np.cos(gamma), -np.sin(gamma), 0],
                    [np.sin(gamma), np.cos(gamma), 0], [0, 0, 1]])
    v3 = rot @ v2
    v1 = _isoceles_between(v0, v2)
    v4 = _isoceles_between(v3, v0)
    pentagon = np.vstack([v0, v1, v2, v3, v4])
    lengths = np.linalg.norm(np.roll(pentagon, -1, axis=0) - pentagon, axis=1)
    assert np.allclose(lengths, 1.0, atol=1e-9)
    from rhombidome.geom import circumradius

    assert circumradius(v0, v2, v3) >= 1.0
    split = pentagon_split(pentagon)
    assert 1 <= len(split.fixes) <= 3
    for rho in split.rhombi:
        rho.validate()
    split.triangle.validate()


def _isoceles_between(a, b):
    mid = 0.5 * (a + b)
    d = b - a
    gap = np.linalg.norm(d)
    perp = np.array([-d[1], d[0], 0.0]) / gap
    return mid + np.sqrt(1.0 - 0.25 * gap * gap) * perp


def test_pentagon_split_apex_on_positive_side(regular_pentagon):
    split = pentagon_split(regular_pentagon.components[0])
    p = regular_pentagon.components[0]
    normal = np.cross(p[2] - p[0], p[3] - p[0])
    assert float(np.dot(split.apex - p[0], normal)) > 0


# ---------------------------------------------------------------------------
# full reduction


def test_reduce_triangle(unit_triangle):
    ledger = reduce_to_rhombi(unit_triangle)
    assert len(ledger.triangles) == 1
    assert ledger.final_rhombi == []
    assert ledger.stats["k"] == 0
    assert ledger.final_curve.components == []


def test_reduce_rhombus_identity(unit_square):
    ledger = reduce_to_rhombi(unit_square)
    assert len(ledger.final_rhombi) == 1
    assert ledger.stats["k"] == 1
    assert len(ledger.moves) == 1
    # stored with reversed orientation relative to the curve
    assert np.array_equal(ledger.final_rhombi[0].vertices,
                          unit_square.components[0][[0, 3, 2, 1]])


def test_reduce_regular_pentagon(regular_pentagon):
    ledger = reduce_to_rhombi(regular_pentagon)
    assert ledger.stats == {**ledger.stats, "k": 2, "planarize_moves": 0,
                            "pack_moves": 0, "splits": 0, "fixes": 0}
    assert len(ledger.final_rhombi) == 2
    assert len(ledger.triangles) == 1


def test_reduce_multicomponent():
    tri = np.array([[0, 0, 0], [1, 0, 0], [0.5, np.sqrt(3) / 2, 0.0]])
    rng = np.random.default_rng(14)
    loop = random_integral_curve(7, rng).components[0] + np.array([5.0, 0, 0])
    curve = IntegralCurve([tri, loop])
    ledger = reduce_to_rhombi(curve)
    assert ledger.final_curve.components == []
    rows = ledger.stats["per_component"]
    assert [row["edges"] for row in rows] == [3, 7]
    for row in rows:
        assert row["rhombi_used"] <= row["budget"]


def test_reduce_rejects_short_component():
    from rhombidome.curve import InvalidCurveError

    with pytest.raises((ComponentTooShortError, InvalidCurveError)):
        reduce_to_rhombi(IntegralCurve([np.array([[0, 0, 0], [1, 0, 0.0]])]))


def test_reduce_replay_is_bitwise():
    rng = np.random.default_rng(15)
    curve = random_integral_curve(11, rng)
    ledger = reduce_to_rhombi(curve)
    replay = Replayer(ledger.initial)
    for move in ledger.moves:
        replay.apply(move)
    final = replay.final_curve()
    assert len(final.components) == len(ledger.final_curve.components) == 0


def test_component_budget_values():
    assert component_budget(3) == 0
    assert component_budget(4) == 1
    assert component_budget(5) == 23
    assert component_budget(6) == 36


# ---------------------------------------------------------------------------
# degenerate configurations


def test_apply_pivot_degenerate_emits_seams_not_rhombus():
    a = np.array([0.0, 0.0, 0.0])
    b = np.array([1.0, 0.0, 0.0])
    c = np.array([0.0, 1.0, 0.0])
    d = np.array([-np.sqrt(3) / 2, 0.5, 0.0])
    curve = IntegralCurve([np.vstack([a, b, a, c, d])])
    curve.validate()
    new_curve, move = apply_pivot(curve, 0, 1, np.array([0.0, 0.0, 1.0]))
    assert move.degenerate and move.rhombus is None
    assert np.allclose(new_curve.components[0][1], [0, 0, 1])


def test_reduce_backtracking_pentagon():
    from rhombidome.surface import validate_ledger

    a = np.array([0.0, 0.0, 0.0])
    b = np.array([1.0, 0.0, 0.0])
    c = np.array([0.0, 1.0, 0.0])
    d = np.array([-np.sqrt(3) / 2, 0.5, 0.0])
    curve = IntegralCurve([np.vstack([a, b, a, c, d])])
    ledger = reduce_to_rhombi(curve)
    assert validate_ledger(ledger).passed


def test_reduce_collinear_out_and_back():
    # two length-3 edges out and back: everything is collinear and every
    # pack transposition across a backtrack is a degenerate pivot
    from rhombidome.curve import from_integer_curve
    from rhombidome.cobordism import PivotMove
    from rhombidome.surface import validate_ledger

    digon = from_integer_curve([np.array([[0, 0, 0], [3, 0, 0.0]])])
    assert digon.edge_count == 6
    ledger = reduce_to_rhombi(digon)
    degenerate = [m for m in ledger.moves
                  if isinstance(m, PivotMove) and m.degenerate]
    assert degenerate
    assert all(m.rhombus is None for m in degenerate)
    assert validate_ledger(ledger).passed
    assert ledger.stats["k"] <= 36


def test_reduce_subdivided_triangles():
    from rhombidome.curve import from_integer_curve
    from rhombidome.surface import validate_ledger

    for raw in (np.array([[0, 0, 0], [2, 0, 0], [1, np.sqrt(3), 0.0]]),
                np.array([[0, 0, 0], [3, 0, 0], [3, 4, 0.0]])):
        ledger = reduce_to_rhombi(from_integer_curve([raw]))
        assert validate_ledger(ledger).passed
        assert ledger.stats["k"] <= ledger.stats["budget"]
