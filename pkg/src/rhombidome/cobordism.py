"""Rhombus pivots and the constructive reduction of a curve to unit rhombi.

The pipeline per component is: flatten into a plane by pivoting the highest
vertex onto the point of its pivot circle nearest the plane, gather all
vertices within distance 2 of the base vertex by realizing a bounded-prefix
reordering of the edge vectors with adjacent transpositions, then peel
planar pentagons off the front until nothing is left.  Every step is
recorded as a replayable move so an independent checker can rebuild each
intermediate curve bit for bit and verify the boundary bookkeeping.

Move semantics (state = components keyed by stable integer ids):

* ``PivotMove``      -- replace one vertex; emits one unit rhombus unless the
                        vertex's neighbours coincide (degenerate: seams only).
* ``SplitMove``      -- peel ``[v0 v1 v2 v3 z]`` off a component, leaving
                        ``[v0 z v3 v4 ...]``; the two shared edges are seams.
* ``PentagonMove``   -- consume a 5-cycle into two rhombi, one unit triangle
                        and one seam through the apex.
* ``CloseRhombusMove`` / ``CloseTriangleMove`` -- consume 4- and 3-cycles.

Rhombi retained as boundary output are stored with reversed orientation so
that the assembled 2-chain has boundary equal to (initial curve) + (rhombi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curve import (
    IntegralCurve,
    component_plane,
    farthest_vertex_pair,
    fit_plane,
)
from .geom import (
    DEFAULT_TOL,
    DegenerateError,
    Plane,
    Tolerance,
    apex_at_unit_distance,
    circle_basis,
    dist,
    normalize,
    point_on_circle_nearest_plane,
    reflect_across_line,
    unit_ball_intersection,
)

__all__ = [
    "Rhombus",
    "TriangleFace",
    "SeamPair",
    "PivotMove",
    "SplitMove",
    "PentagonMove",
    "CloseRhombusMove",
    "CloseTriangleMove",
    "Move",
    "CobordismLedger",
    "PentagonSplit",
    "Replayer",
    "NotOnPivotCircleError",
    "PlanarizeBudgetError",
    "NotClosedError",
    "SearchFailedError",
    "FixBudgetExceededError",
    "ComponentTooShortError",
    "ReplayMismatchError",
    "apply_pivot",
    "planarize",
    "steinitz_order",
    "pack",
    "pentagon_split",
    "reduce_to_rhombi",
    "component_budget",
]

STEINITZ_BOUND = 2.0
FIX_PIVOT_BUDGET = 3
_CIRCLE_SAMPLES = 360


class NotOnPivotCircleError(ValueError):
    """Pivot target is not at unit distance from both neighbours."""


class PlanarizeBudgetError(RuntimeError):
    """Flattening exceeded its move budget; indicates a numerical-policy bug."""


class NotClosedError(ValueError):
    """Edge vectors do not sum to zero."""


class SearchFailedError(RuntimeError):
    """No bounded-prefix order found; must not happen for closed unit vectors."""


class FixBudgetExceededError(RuntimeError):
    """Pentagon corrective pivots could not reach circumradius < 1."""


class ComponentTooShortError(ValueError):
    """A component with fewer than 3 edges cannot be reduced."""


class ReplayMismatchError(RuntimeError):
    """A recorded move does not match the replayed curve state."""


# ---------------------------------------------------------------------------
# cells and moves


@dataclass
class Rhombus:
    """Closed 4-cycle with four unit sides (possibly non-planar)."""

    vertices: np.ndarray  # (4, 3)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (4, 3):
            raise ValueError("rhombus needs exactly 4 vertices")
        for i in range(4):
            side = dist(v[i], v[(i + 1) % 4])
            if abs(side - 1.0) > tol.geom_eps:
                raise ValueError(f"rhombus side {i} has length {side}")

    def reversed(self) -> "Rhombus":
        v = np.asarray(self.vertices)
        return Rhombus(np.vstack([v[0], v[3], v[2], v[1]]))


@dataclass
class TriangleFace:
    """Unit equilateral triangle cell."""

    vertices: np.ndarray  # (3, 3)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (3, 3):
            raise ValueError("triangle needs exactly 3 vertices")
        for i in range(3):
            side = dist(v[i], v[(i + 1) % 3])
            if abs(side - 1.0) > tol.geom_eps:
                raise ValueError(f"triangle side {i} has length {side}")


@dataclass
class SeamPair:
    """Two oriented unit segments that coincide with opposite orientation."""

    first: np.ndarray   # (2, 3)
    second: np.ndarray  # (2, 3)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        a = np.asarray(self.first, dtype=float)
        b = np.asarray(self.second, dtype=float)
        if dist(a[0], b[1]) > tol.geom_eps or dist(a[1], b[0]) > tol.geom_eps:
            raise ValueError("seam segments do not cancel")


@dataclass
class PivotMove:
    component: int
    vertex: int
    old_point: np.ndarray
    new_point: np.ndarray
    rhombus: Rhombus | None
    degenerate: bool
    stage: str = "pivot"


@dataclass
class SplitMove:
    component: int
    new_component: int
    z: np.ndarray
    seam_indices: tuple[int, int] = (0, 0)


@dataclass
class PentagonMove:
    component: int
    apex: np.ndarray
    rhombus_indices: tuple[int, int]
    triangle_index: int
    seam_index: int


@dataclass
class CloseRhombusMove:
    component: int
    rhombus_index: int


@dataclass
class CloseTriangleMove:
    component: int
    triangle_index: int


Move = PivotMove | SplitMove | PentagonMove | CloseRhombusMove | CloseTriangleMove


@dataclass
class CobordismLedger:
    """Replayable record of one reduction run.

    ``final_rhombi`` are the boundary rhombi (reversed orientation, see module
    docstring); rhombi attached by pivots live inside their moves.  ``stats``
    carries the edge count n, the total number of rhombi used k, the upper
    bound ``budget`` and per-stage counters.
    """

    initial: IntegralCurve
    moves: list[Move] = field(default_factory=list)
    triangles: list[TriangleFace] = field(default_factory=list)
    seams: list[SeamPair] = field(default_factory=list)
    final_rhombi: list[Rhombus] = field(default_factory=list)
    final_curve: IntegralCurve = field(default_factory=IntegralCurve)
    stats: dict = field(default_factory=dict)


def component_budget(n: int) -> int:
    """Upper bound on rhombi used to reduce one component with n edges."""
    if n >= 5:
        return n * n + 2 * n - 12
    if n == 4:
        return 1
    return 0


# ---------------------------------------------------------------------------
# replay


class Replayer:
    """Applies recorded moves to evolving component state, bit for bit."""

    def __init__(self, initial: IntegralCurve, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        self.components: dict[int, np.ndarray] = {
            i: np.asarray(c, dtype=float).copy() for i, c in enumerate(initial.components)
        }

    def component(self, cid: int) -> np.ndarray:
        try:
            return self.components[cid]
        except KeyError:
            raise ReplayMismatchError(f"component {cid} does not exist") from None

    def apply(self, move: Move) -> None:
        if isinstance(move, PivotMove):
            self._apply_pivot(move)
        elif isinstance(move, SplitMove):
            self._apply_split(move)
        elif isinstance(move, PentagonMove):
            self._consume(move.component, 5)
        elif isinstance(move, CloseRhombusMove):
            self._consume(move.component, 4)
        elif isinstance(move, CloseTriangleMove):
            self._consume(move.component, 3)
        else:
            raise ReplayMismatchError(f"unknown move type {type(move)!r}")

    def _apply_pivot(self, move: PivotMove) -> None:
        v = self.component(move.component)
        n = len(v)
        if not 0 <= move.vertex < n:
            raise ReplayMismatchError("pivot vertex out of range")
        if not np.array_equal(v[move.vertex], move.old_point):
            raise ReplayMismatchError("pivot old point does not match state")
        prev = v[(move.vertex - 1) % n]
        nxt = v[(move.vertex + 1) % n]
        for nb in (prev, nxt):
            if abs(dist(nb, move.new_point) - 1.0) > self.tol.geom_eps:
                raise NotOnPivotCircleError(
                    "pivot target not at unit distance from a neighbour")
        v[move.vertex] = move.new_point

    def _apply_split(self, move: SplitMove) -> None:
        v = self.component(move.component)
        if len(v) < 6:
            raise ReplayMismatchError("split needs a component with > 5 edges")
        if move.new_component in self.components:
            raise ReplayMismatchError("split target id already in use")
        z = np.asarray(move.z, dtype=float)
        pentagon = np.vstack([v[0:4], z[None, :]])
        remainder = np.vstack([v[0:1], z[None, :], v[3:]])
        self.components[move.new_component] = pentagon
        self.components[move.component] = remainder

    def _consume(self, cid: int, expected_len: int) -> None:
        v = self.component(cid)
        if len(v) != expected_len:
            raise ReplayMismatchError(
                f"component {cid} has {len(v)} vertices, expected {expected_len}")
        del self.components[cid]

    def final_curve(self) -> IntegralCurve:
        return IntegralCurve([self.components[k].copy() for k in sorted(self.components)])


# ---------------------------------------------------------------------------
# single pivot


def _make_pivot(state: Replayer, cid: int, i: int, target: np.ndarray,
                stage: str, seams: list[SeamPair],
                tol: Tolerance) -> PivotMove | None:
    """Build, validate, record and apply one pivot; None for a no-op."""
    v = state.component(cid)
    n = len(v)
    old = v[i].copy()
    target = np.asarray(target, dtype=float).copy()
    if dist(old, target) <= tol.geom_eps:
        return None
    prev = v[(i - 1) % n].copy()
    nxt = v[(i + 1) % n].copy()
    for nb in (prev, nxt):
        if abs(dist(nb, target) - 1.0) > tol.geom_eps:
            raise NotOnPivotCircleError(
                f"pivot target at distance {dist(nb, target)} from a neighbour")
    degenerate = dist(prev, nxt) <= tol.geom_eps
    if degenerate:
        rhombus = None
        seams.append(SeamPair(np.vstack([prev, old]), np.vstack([old, prev])))
        seams.append(SeamPair(np.vstack([prev, target]), np.vstack([target, prev])))
    else:
        rhombus = Rhombus(np.vstack([prev, old, nxt, target]))
        rhombus.validate(tol)
    move = PivotMove(cid, i, old, target, rhombus, degenerate, stage)
    state.apply(move)
    return move


def apply_pivot(curve: IntegralCurve, comp: int, i: int, p: np.ndarray,
                tol: Tolerance = DEFAULT_TOL) -> tuple[IntegralCurve, PivotMove | None]:
    """Replace vertex ``i`` of component ``comp`` by ``p``.

    ``p`` must lie on the circle at unit distance from both cyclic
    neighbours.  Returns the new curve and the recorded move; a target equal
    to the current vertex is a no-op and returns the curve unchanged with
    move None.
    """
    state = Replayer(curve, tol)
    seams: list[SeamPair] = []
    move = _make_pivot(state, comp, i, p, "pivot", seams, tol)
    if move is None:
        return curve.copy(), None
    return IntegralCurve([state.components[k] for k in sorted(state.components)]), move


# ---------------------------------------------------------------------------
# planarize


def _best_plane_through(points: np.ndarray, iv: int, iw: int) -> Plane:
    """Among planes containing the line (v, w), minimize summed squared heights.

    One-parameter family: unit normals orthogonal to w - v.  The quadratic
    form of second moments restricted to that 2-plane is minimized by the
    eigenvector of its smaller eigenvalue (closed form via ``eigh``).
    """
    v = points[iv]
    d = normalize(points[iw] - v)
    seed = np.array([1.0, 0.0, 0.0])
    if abs(float(np.dot(seed, d))) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = normalize(seed - np.dot(seed, d) * d)
    e2 = np.cross(d, e1)
    rel = points - v
    m = rel.T @ rel
    basis = np.column_stack([e1, e2])
    restricted = basis.T @ m @ basis
    eigvals, eigvecs = np.linalg.eigh(restricted)
    normal = basis @ eigvecs[:, 0]
    return Plane(base=v.copy(), normal=normalize(normal))


def _sphere_point_nearest_plane(center: np.ndarray, plane: Plane) -> np.ndarray:
    """Deterministic point of the unit sphere around ``center`` nearest the plane."""
    s = float(np.dot(center - plane.base, plane.normal))
    if abs(s) >= 1.0:
        return center - np.sign(s) * plane.normal
    u = np.cross(plane.normal, np.array([1.0, 0.0, 0.0]))
    if np.linalg.norm(u) <= 1e-6:
        u = np.cross(plane.normal, np.array([0.0, 1.0, 0.0]))
    u = normalize(u)
    return center - s * plane.normal + np.sqrt(1.0 - s * s) * u


_PLANAR_STOP = 1e-10


def _flatten_path(state: Replayer, cid: int, path: list[int], plane: Plane,
                  moves: list[Move], seams: list[SeamPair], counters: dict,
                  tol: Tolerance, budget: int) -> None:
    """Drive every interior vertex of one path into the plane.

    Repeatedly pivots the leftmost highest interior vertex to the point of
    its pivot circle nearest the plane.  The chosen vertex always satisfies
    h[j-1] < h[j] >= h[j+1], and the replacement height never exceeds
    h[j-1]; both are asserted because the move budget rests on them.
    """
    v = state.component(cid)
    n = len(v)
    while True:
        heights = np.abs((v[path] - plane.base) @ plane.normal)
        interior = heights[1:-1]
        if len(interior) == 0 or float(np.max(interior)) <= _PLANAR_STOP:
            return
        j = 1 + int(np.argmax(interior))
        if not (heights[j - 1] < heights[j] >= heights[j + 1]):
            raise PlanarizeBudgetError("height maximum selection is inconsistent")
        g = path[j]
        prev = v[(g - 1) % n]
        nxt = v[(g + 1) % n]
        if dist(prev, nxt) <= tol.geom_eps:
            target = _sphere_point_nearest_plane(prev, plane)
        else:
            circle = unit_ball_intersection(prev, nxt, tol)
            target = point_on_circle_nearest_plane(circle, plane, tol)
        new_height = abs(float(np.dot(target - plane.base, plane.normal)))
        if new_height > heights[j - 1] + 1e-12:
            raise PlanarizeBudgetError(
                f"pivot did not descend: {new_height} > {heights[j - 1]}")
        if counters["planarize"] + 1 > budget:
            raise PlanarizeBudgetError("planarize exceeded its move budget")
        move = _make_pivot(state, cid, g, target, "planarize", seams, tol)
        if move is None:
            raise PlanarizeBudgetError("planarize produced a no-op pivot")
        moves.append(move)
        counters["planarize"] += 1
        if move.rhombus is not None:
            counters["rhombi"] += 1


def _planarize_component(state: Replayer, cid: int, moves: list[Move],
                         seams: list[SeamPair], counters: dict,
                         tol: Tolerance) -> Plane:
    v = state.component(cid)
    existing = component_plane(v, tol)
    if existing is not None:
        return existing
    n = len(v)
    iv, iw = farthest_vertex_pair(v)
    plane = _best_plane_through(v, iv, iw)
    budget = n * (n - 1) // 2
    forward = [(iv + k) % n for k in range(((iw - iv) % n) + 1)]
    backward = [(iw + k) % n for k in range(((iv - iw) % n) + 1)]
    _flatten_path(state, cid, forward, plane, moves, seams, counters, tol, budget)
    _flatten_path(state, cid, backward, plane, moves, seams, counters, tol, budget)
    return plane


def planarize(curve: IntegralCurve,
              tol: Tolerance = DEFAULT_TOL) -> tuple[IntegralCurve, list[PivotMove]]:
    """Pivot each component until it lies in a plane.

    Per component: a plane through a farthest vertex pair is chosen to
    minimize summed squared heights, then max-height pivots flatten the two
    paths between the pair.  Uses at most C(n, 2) moves per component.
    """
    curve.validate(tol)
    state = Replayer(curve, tol)
    moves: list[Move] = []
    seams: list[SeamPair] = []
    for cid in range(len(curve.components)):
        counters = {"planarize": 0, "rhombi": 0}
        _planarize_component(state, cid, moves, seams, counters, tol)
    return state.final_curve(), [m for m in moves if isinstance(m, PivotMove)]


# ---------------------------------------------------------------------------
# bounded-prefix reordering (packing)


def _prefix_ok(vectors: np.ndarray, order: np.ndarray, bound: float) -> bool:
    acc = np.zeros(vectors.shape[1])
    for idx in order:
        acc = acc + vectors[idx]
        if float(np.linalg.norm(acc)) > bound:
            return False
    return True


def _greedy_order(vectors: np.ndarray, bound: float) -> np.ndarray | None:
    n = len(vectors)
    remaining = list(range(n))
    acc = np.zeros(vectors.shape[1])
    order = []
    for _ in range(n):
        best = None
        best_norm = None
        for idx in remaining:
            cand = float(np.linalg.norm(acc + vectors[idx]))
            if best_norm is None or cand < best_norm - 1e-15:
                best = idx
                best_norm = cand
        if best_norm is None or best_norm > bound:
            return None
        order.append(best)
        remaining.remove(best)
        acc = acc + vectors[best]
    return np.array(order, dtype=int)


def _dfs_order(vectors: np.ndarray, bound: float, node_cap: int) -> np.ndarray | None:
    """Backtracking search over orders with every prefix norm <= bound.

    Children are expanded smallest-new-norm first, so the greedy order is
    the first leaf tried.  Complete when the node cap is not hit.
    """
    n = len(vectors)
    order: list[int] = []
    used = [False] * n
    nodes = 0

    def rec(acc: np.ndarray, depth: int) -> bool:
        nonlocal nodes
        if depth == n:
            return True
        nodes += 1
        if nodes > node_cap:
            return False
        cands = []
        for idx in range(n):
            if used[idx]:
                continue
            nrm = float(np.linalg.norm(acc + vectors[idx]))
            if nrm <= bound:
                cands.append((nrm, idx))
        cands.sort()
        for _, idx in cands:
            used[idx] = True
            order.append(idx)
            if rec(acc + vectors[idx], depth + 1):
                return True
            order.pop()
            used[idx] = False
        return False

    if rec(np.zeros(vectors.shape[1]), 0):
        return np.array(order, dtype=int)
    return None


def _beam_order(vectors: np.ndarray, bound: float, width: int) -> np.ndarray | None:
    n = len(vectors)
    states = [(0.0, np.zeros(vectors.shape[1]), 0, [])]  # (worst prefix, acc, mask, order)
    for _ in range(n):
        children = []
        seen = set()
        for worst, acc, mask, order in states:
            for idx in range(n):
                bit = 1 << idx
                if mask & bit:
                    continue
                new_acc = acc + vectors[idx]
                nrm = float(np.linalg.norm(new_acc))
                if nrm > bound:
                    continue
                key = (mask | bit, round(new_acc[0], 12), round(new_acc[1], 12))
                if key in seen:
                    continue
                seen.add(key)
                children.append((max(worst, nrm), new_acc, mask | bit, order + [idx]))
        if not children:
            return None
        children.sort(key=lambda s: s[0])
        states = children[:width]
    return np.array(states[0][3], dtype=int)


def steinitz_order(vectors: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Permutation keeping every prefix sum of unit plane vectors within 2.

    The identity is returned when it already qualifies; otherwise greedy
    (smallest next prefix norm), then exhaustive backtracking for n <= 10
    or beam search with a backtracking fallback above.
    """
    vectors = np.asarray(vectors, dtype=float)
    n = len(vectors)
    norms = np.linalg.norm(vectors, axis=1)
    if float(np.max(np.abs(norms - 1.0))) > 1e-6:
        raise ValueError("vectors must be unit length")
    if float(np.linalg.norm(vectors.sum(axis=0))) > max(1.0, n) * 10 * tol.geom_eps:
        raise NotClosedError("vectors do not sum to zero")
    bound = STEINITZ_BOUND + tol.geom_eps
    identity = np.arange(n)
    if _prefix_ok(vectors, identity, bound):
        return identity
    order = _greedy_order(vectors, bound)
    if order is not None:
        return order
    if n <= 10:
        order = _dfs_order(vectors, bound, node_cap=10_000_000)
    else:
        order = _beam_order(vectors, bound, width=256)
        if order is None:
            order = _dfs_order(vectors, bound, node_cap=2_000_000)
    if order is None:
        raise SearchFailedError("no bounded-prefix order found")
    return order


def _plane_frame(plane: Plane) -> tuple[np.ndarray, np.ndarray]:
    u = np.cross(plane.normal, np.array([1.0, 0.0, 0.0]))
    if np.linalg.norm(u) <= 1e-6:
        u = np.cross(plane.normal, np.array([0.0, 1.0, 0.0]))
    e1 = normalize(u)
    e2 = np.cross(plane.normal, e1)
    return e1, e2


def _pack_component(state: Replayer, cid: int, moves: list[Move],
                    seams: list[SeamPair], counters: dict,
                    tol: Tolerance) -> None:
    """Realize a bounded-prefix edge order with adjacent-transposition pivots.

    Swapping consecutive edge vectors u_j, u_{j+1} moves the shared vertex to
    v_j + u_{j+1}, which for a planar curve is its reflection across the line
    through the neighbours.  Bubble sort realizes the target order with at
    most C(n, 2) swaps; the base vertex 0 never moves.
    """
    v = state.component(cid)
    n = len(v)
    plane = fit_plane(v)
    e1, e2 = _plane_frame(plane)
    edges = np.roll(v, -1, axis=0) - v
    vecs2d = edges @ np.column_stack([e1, e2])
    sigma = steinitz_order(vecs2d, tol)
    pos = np.empty(n, dtype=int)
    pos[sigma] = np.arange(n)
    arrangement = list(range(n))
    swapped = True
    while swapped:
        swapped = False
        for j in range(n - 1):
            if pos[arrangement[j]] > pos[arrangement[j + 1]]:
                target = v[j] + (v[(j + 2) % n] - v[j + 1])
                move = _make_pivot(state, cid, j + 1, target, "pack", seams, tol)
                if move is not None:
                    moves.append(move)
                    counters["pack"] += 1
                    if move.rhombus is not None:
                        counters["rhombi"] += 1
                arrangement[j], arrangement[j + 1] = arrangement[j + 1], arrangement[j]
                swapped = True
    radii = np.linalg.norm(v - v[0], axis=1)
    if float(np.max(radii)) > STEINITZ_BOUND + tol.geom_eps:
        raise SearchFailedError("packing postcondition violated")


def pack(curve: IntegralCurve,
         tol: Tolerance = DEFAULT_TOL) -> tuple[IntegralCurve, list[PivotMove]]:
    """Pivot each planar component until all vertices are within 2 of vertex 0."""
    curve.validate(tol)
    state = Replayer(curve, tol)
    moves: list[Move] = []
    seams: list[SeamPair] = []
    for cid, comp in enumerate(curve.components):
        if component_plane(comp, tol) is None:
            raise ValueError(f"component {cid} is not planar")
        counters = {"pack": 0, "rhombi": 0}
        _pack_component(state, cid, moves, seams, counters, tol)
    return state.final_curve(), [m for m in moves if isinstance(m, PivotMove)]


# ---------------------------------------------------------------------------
# pentagon base case


def _pentagon_ready(p: np.ndarray, tol: Tolerance) -> bool:
    try:
        return apex_at_unit_distance(p[0], p[2], p[3], +1, tol) is not None
    except DegenerateError:
        return False


def _best_circle_sample(p: np.ndarray, tol: Tolerance) -> np.ndarray | None:
    """Point of vertex 2's full pivot circle minimizing circumradius([v0 . v3])."""
    if dist(p[1], p[3]) <= tol.geom_eps:
        return None
    circle = unit_ball_intersection(p[1], p[3], tol)
    e1, e2 = circle_basis(circle)
    theta = 2.0 * np.pi * np.arange(_CIRCLE_SAMPLES) / _CIRCLE_SAMPLES
    pts = (circle.center
           + circle.radius * (np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2))
    rel0 = pts - p[0]
    rel3 = pts - p[3]
    side_a = np.linalg.norm(rel0, axis=1)
    side_b = np.linalg.norm(rel3, axis=1)
    side_c = dist(p[0], p[3])
    area2 = np.linalg.norm(np.cross(rel0, p[3] - p[0]), axis=1)
    radii = np.where(area2 > tol.geom_eps,
                     side_a * side_b * side_c / np.maximum(2.0 * area2, 1e-300),
                     np.inf)
    j = int(np.argmin(radii))
    if not np.isfinite(radii[j]):
        return None
    return pts[j]


def _fix_candidates(p: np.ndarray, tol: Tolerance):
    """Candidate corrective pivots, deterministic order, lazily generated.

    Three in-line reflections first, then the best of a dense sweep of
    vertex 2's full pivot circle (minimizing the circumradius of [v0 v2 v3]).
    """
    for i, a, b in ((2, 1, 3), (1, 0, 2), (3, 2, 4)):
        if dist(p[a], p[b]) <= tol.geom_eps:
            continue
        target = reflect_across_line(p[i], p[a], p[b], tol)
        if dist(target, p[i]) > tol.geom_eps:
            yield (i, target)
    best = _best_circle_sample(p, tol)
    if best is not None and dist(best, p[2]) > tol.geom_eps:
        yield (2, best)


def _search_fixes(p: np.ndarray, depth: int,
                  tol: Tolerance) -> list[tuple[int, np.ndarray]] | None:
    if _pentagon_ready(p, tol):
        return []
    if depth == 0:
        return None
    for i, target in _fix_candidates(p, tol):
        trial = p.copy()
        trial[i] = target
        rest = _search_fixes(trial, depth - 1, tol)
        if rest is not None:
            return [(i, target)] + rest
    return None


@dataclass
class PentagonSplit:
    rhombi: tuple[Rhombus, Rhombus]
    triangle: TriangleFace
    fixes: list[PivotMove]
    apex: np.ndarray
    pentagon: np.ndarray  # vertices after fixes


def pentagon_split(pentagon: np.ndarray,
                   tol: Tolerance = DEFAULT_TOL) -> PentagonSplit:
    """Split a unit pentagon into two unit rhombi and one unit triangle.

    An apex at unit distance from vertices 0, 2 and 3 exists once the
    circumradius of that triangle is below 1; up to three corrective pivots
    establish this first when needed.  The rhombi are [v0 v1 v2 a] and
    [v0 a v3 v4]; the face is [v2 v3 a].
    """
    p = np.asarray(pentagon, dtype=float).copy()
    if p.shape != (5, 3):
        raise ValueError("pentagon needs exactly 5 vertices")
    for i in range(5):
        side = dist(p[i], p[(i + 1) % 5])
        if abs(side - 1.0) > tol.geom_eps:
            raise ValueError(f"pentagon side {i} has length {side}")
    radii = np.linalg.norm(p - p[0], axis=1)
    if float(np.max(radii)) > STEINITZ_BOUND + 10 * tol.geom_eps:
        raise ValueError("pentagon is not packed around vertex 0")

    plan = _search_fixes(p, FIX_PIVOT_BUDGET, tol)
    if plan is None:
        raise FixBudgetExceededError(
            "no sequence of <= 3 corrective pivots reaches circumradius < 1")
    fixes: list[PivotMove] = []
    state = Replayer(IntegralCurve([p]), tol)
    seams: list[SeamPair] = []
    for i, target in plan:
        move = _make_pivot(state, 0, i, target, "fix", seams, tol)
        if move is not None:
            fixes.append(move)
    p = state.component(0)
    apex = apex_at_unit_distance(p[0], p[2], p[3], +1, tol)
    if apex is None:
        raise FixBudgetExceededError("corrective pivots failed to open the apex")
    rho_a = Rhombus(np.vstack([p[0], p[1], p[2], apex]))
    rho_b = Rhombus(np.vstack([p[0], apex, p[3], p[4]]))
    face = TriangleFace(np.vstack([p[2], p[3], apex]))
    rho_a.validate(tol)
    rho_b.validate(tol)
    face.validate(tol)
    return PentagonSplit((rho_a, rho_b), face, fixes, apex, p.copy())


# ---------------------------------------------------------------------------
# full reduction


def _choose_bridge(v: np.ndarray, plane: Plane, tol: Tolerance) -> np.ndarray:
    """Point of the plane at unit distance from v[0] and v[3].

    Of the two circle/plane intersection points, the one farther from the
    midpoint of v[1], v[2] is taken so the peeled pentagon does not fold
    straight back onto the remaining curve.
    """
    v1, v4 = v[0], v[3]
    away = 0.5 * (v[1] + v[2])
    d = dist(v1, v4)
    if d <= tol.geom_eps:
        # unit circle around v1 inside the plane
        radial = (v1 - away) - np.dot(v1 - away, plane.normal) * plane.normal
        if np.linalg.norm(radial) <= tol.geom_eps:
            radial = _plane_frame(plane)[0]
        return v1 + normalize(radial)
    circle = unit_ball_intersection(v1, v4, tol)
    w = normalize(np.cross(circle.axis, plane.normal))
    cands = [circle.center + circle.radius * w, circle.center - circle.radius * w]
    return max(cands, key=lambda q: dist(q, away))


def _consume_pentagon(state: Replayer, cid: int, ledger: CobordismLedger,
                      counters: dict, tol: Tolerance) -> None:
    p = state.component(cid)
    split = pentagon_split(p, tol)
    for fix in split.fixes:
        move = PivotMove(cid, fix.vertex, fix.old_point, fix.new_point,
                         fix.rhombus, fix.degenerate, "fix")
        state.apply(move)
        ledger.moves.append(move)
        counters["fixes"] += 1
        if move.rhombus is not None:
            counters["rhombi"] += 1
        else:
            v = state.component(cid)
            nb = v[(move.vertex - 1) % len(v)].copy()
            ledger.seams.append(SeamPair(np.vstack([nb, move.old_point]),
                                         np.vstack([move.old_point, nb])))
            ledger.seams.append(SeamPair(np.vstack([nb, move.new_point]),
                                         np.vstack([move.new_point, nb])))
    p = state.component(cid)
    apex = split.apex
    rho_a, rho_b = split.rhombi
    tri_index = len(ledger.triangles)
    ledger.triangles.append(split.triangle)
    seam_index = len(ledger.seams)
    ledger.seams.append(SeamPair(np.vstack([apex, p[0]]), np.vstack([p[0], apex])))
    ra_index = len(ledger.final_rhombi)
    ledger.final_rhombi.append(rho_a.reversed())
    ledger.final_rhombi.append(rho_b.reversed())
    counters["rhombi"] += 2
    move = PentagonMove(cid, apex.copy(), (ra_index, ra_index + 1), tri_index, seam_index)
    state.apply(move)
    ledger.moves.append(move)


def reduce_to_rhombi(curve: IntegralCurve,
                     tol: Tolerance = DEFAULT_TOL) -> CobordismLedger:
    """Reduce every component to unit rhombi, emitting a verifiable ledger.

    Components of length 3 become one triangle face, length 4 one boundary
    rhombus; longer components are flattened, packed, and peeled into
    pentagons, each of which yields two rhombi and one triangle.  The total
    number of rhombi used stays within n^2 + 2n - 12 per component.
    """
    curve.validate(tol)
    initial = curve.copy()
    ledger = CobordismLedger(initial=initial)
    state = Replayer(initial, tol)
    next_id = len(initial.components)
    per_component = []
    totals = {"planarize": 0, "pack": 0, "splits": 0, "fixes": 0, "rhombi": 0}

    for root in range(len(initial.components)):
        n0 = len(initial.components[root])
        if n0 < 3:
            raise ComponentTooShortError(f"component {root} has fewer than 3 edges")
        counters = {"planarize": 0, "pack": 0, "splits": 0, "fixes": 0, "rhombi": 0}
        if n0 == 3:
            tri = TriangleFace(state.component(root).copy())
            tri.validate(tol)
            idx = len(ledger.triangles)
            ledger.triangles.append(tri)
            move = CloseTriangleMove(root, idx)
            state.apply(move)
            ledger.moves.append(move)
        elif n0 == 4:
            rho = Rhombus(state.component(root).copy()).reversed()
            rho.validate(tol)
            idx = len(ledger.final_rhombi)
            ledger.final_rhombi.append(rho)
            counters["rhombi"] += 1
            move = CloseRhombusMove(root, idx)
            state.apply(move)
            ledger.moves.append(move)
        else:
            plane = _planarize_component(state, root, ledger.moves, ledger.seams,
                                         counters, tol)
            _pack_component(state, root, ledger.moves, ledger.seams, counters, tol)
            while len(state.component(root)) > 5:
                v = state.component(root)
                z = _choose_bridge(v, plane, tol)
                pent_id = next_id
                next_id += 1
                s_index = len(ledger.seams)
                ledger.seams.append(SeamPair(np.vstack([v[3], z]), np.vstack([z, v[3]])))
                ledger.seams.append(SeamPair(np.vstack([z, v[0]]), np.vstack([v[0], z])))
                move = SplitMove(root, pent_id, z.copy(), (s_index, s_index + 1))
                state.apply(move)
                ledger.moves.append(move)
                counters["splits"] += 1
                _consume_pentagon(state, pent_id, ledger, counters, tol)
            _consume_pentagon(state, root, ledger, counters, tol)
        budget = component_budget(n0)
        if counters["rhombi"] > budget:
            raise PlanarizeBudgetError(
                f"component {root} used {counters['rhombi']} rhombi, budget {budget}")
        per_component.append({"component": root, "edges": n0,
                              "rhombi_used": counters["rhombi"], "budget": budget})
        for key in totals:
            totals[key] += counters[key]

    ledger.final_curve = state.final_curve()
    ledger.stats = {
        "n": initial.edge_count,
        "k": totals["rhombi"],
        "budget": sum(row["budget"] for row in per_component),
        "planarize_moves": totals["planarize"],
        "pack_moves": totals["pack"],
        "splits": totals["splits"],
        "fixes": totals["fixes"],
        "per_component": per_component,
    }
    return ledger
