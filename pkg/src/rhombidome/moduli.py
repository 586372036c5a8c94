"""Numerical linkage moduli: tangent spaces, a skew pairing, and certificates.

Realizations live on schemes cut out by quadratic edge-length constraints
plus linear closure/triangle/cycle constraints; tangent spaces are numerical
kernels of the linearized constraints (SVD with a relative singular-value
cutoff).  The skew pairing on polygon tangents is

    sum over edges of  det[t(f), t'(f), p(f)] / length(f)^2 ,

whose kernel at any point is exactly the tangent space of the per-polygon
rotation orbits; certificates below check that numerically, together with
the vanishing of the pairing pulled back through the boundary map of an
orientable surface and the rank bounds that follow from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space, orth, subspace_angles

from .curve import random_integral_curve
from .geom import DEFAULT_TOL, Tolerance
from .surface import GraphSurface, is_oriented_consistently, ref_edge

__all__ = [
    "PolygonSystem",
    "PolygonPoint",
    "SurfaceRealization",
    "DisconnectedError",
    "ProjectionDivergedError",
    "NotOrientableError",
    "BoundaryShapeMismatchError",
    "polygon_point",
    "random_polygon_point",
    "all_parallel_quad",
    "polygon_tangent_basis",
    "symplectic_pairing",
    "pairing_gram",
    "rotation_orbit_basis",
    "symplectic_kernel_basis",
    "subspace_max_angle",
    "cycle_basis",
    "realize_surface",
    "surface_constraint_residual",
    "surface_tangent_basis",
    "boundary_point",
    "boundary_differential",
    "isotropy_certificate",
    "rank_certificate",
    "numerical_rank",
]


class DisconnectedError(ValueError):
    """The surface 1-skeleton is not connected."""


class ProjectionDivergedError(RuntimeError):
    """Gauss-Newton reprojection did not reach the target residual."""


class NotOrientableError(ValueError):
    """Certificate requires a consistently oriented closed surface."""


class BoundaryShapeMismatchError(ValueError):
    """Certificate requires three unit 4-gon boundary components."""


_SO3_BASIS = np.array([
    [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
    [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
    [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
])


# ---------------------------------------------------------------------------
# polygon schemes


@dataclass
class PolygonSystem:
    """Edge lengths of a tuple of combinatorial polygons."""

    lengths: list[np.ndarray]

    @property
    def sizes(self) -> list[int]:
        return [len(l) for l in self.lengths]

    @property
    def offsets(self) -> list[int]:
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return out

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def flat_lengths(self) -> np.ndarray:
        return np.concatenate(self.lengths)


@dataclass
class PolygonPoint:
    """Realization of a polygon tuple: one 3-vector per edge, closed per polygon."""

    system: PolygonSystem
    vectors: np.ndarray  # (K, 3)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        lengths = self.system.flat_lengths()
        norms = np.linalg.norm(self.vectors, axis=1)
        if float(np.max(np.abs(norms - lengths))) > 1e-6:
            raise ValueError("edge vectors do not match the length function")
        offsets = self.system.offsets
        for i in range(len(self.system.lengths)):
            closure = self.vectors[offsets[i]:offsets[i + 1]].sum(axis=0)
            if float(np.linalg.norm(closure)) > 1e-6:
                raise ValueError(f"polygon {i} does not close up")


def polygon_point(edge_vector_lists: list[np.ndarray]) -> PolygonPoint:
    lengths = [np.linalg.norm(np.asarray(v, dtype=float), axis=1)
               for v in edge_vector_lists]
    vectors = np.vstack([np.asarray(v, dtype=float) for v in edge_vector_lists])
    return PolygonPoint(PolygonSystem(lengths), vectors)


def random_polygon_point(sizes: list[int], rng: np.random.Generator) -> PolygonPoint:
    """Random unit polygons (closed walks of unit steps), one per size."""
    parts = []
    for k in sizes:
        verts = random_integral_curve(k, rng).components[0]
        parts.append(np.roll(verts, -1, axis=0) - verts)
    return polygon_point(parts)


def all_parallel_quad() -> PolygonPoint:
    """The singular unit 4-gon with all edges on one line: (e, -e, e, -e)."""
    e = np.array([1.0, 0.0, 0.0])
    return polygon_point([np.vstack([e, -e, e, -e])])


def numerical_rank(matrix: np.ndarray, rel_eps: float) -> tuple[int, np.ndarray]:
    """Rank at a relative singular-value threshold, plus the spectrum."""
    if matrix.size == 0:
        return 0, np.zeros(0)
    s = np.linalg.svd(matrix, compute_uv=False)
    if len(s) == 0 or s[0] == 0.0:
        return 0, s
    return int(np.sum(s > rel_eps * s[0])), s


def _polygon_constraint_matrix(point: PolygonPoint) -> np.ndarray:
    """Stacked linearized constraints: per-edge orthogonality and closure."""
    total = point.system.total
    n = len(point.system.lengths)
    rows = np.zeros((total + 3 * n, 3 * total))
    for j in range(total):
        rows[j, 3 * j:3 * j + 3] = point.vectors[j]
    offsets = point.system.offsets
    for i in range(n):
        for j in range(offsets[i], offsets[i + 1]):
            for c in range(3):
                rows[total + 3 * i + c, 3 * j + c] = 1.0
    return rows


def polygon_tangent_basis(point: PolygonPoint,
                          tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (D, K, 3) of the polygon scheme tangent space."""
    a = _polygon_constraint_matrix(point)
    kernel = null_space(a, rcond=tol.rank_rel_eps)
    return kernel.T.reshape(-1, point.system.total, 3)


def symplectic_pairing(point: PolygonPoint, t1: np.ndarray, t2: np.ndarray) -> float:
    """Skew pairing: triple products of two tangents against the edge vectors."""
    t1 = np.asarray(t1, dtype=float).reshape(point.system.total, 3)
    t2 = np.asarray(t2, dtype=float).reshape(point.system.total, 3)
    lengths = point.system.flat_lengths()
    triple = np.einsum("ij,ij->i", t1, np.cross(t2, point.vectors))
    return float(np.sum(triple / lengths ** 2))


def pairing_gram(point: PolygonPoint, basis: np.ndarray) -> np.ndarray:
    d = len(basis)
    gram = np.zeros((d, d))
    for a in range(d):
        for b in range(a + 1, d):
            val = symplectic_pairing(point, basis[a], basis[b])
            gram[a, b] = val
            gram[b, a] = -val
    return gram


def rotation_orbit_basis(point: PolygonPoint,
                         tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the per-polygon rotation orbit directions."""
    total = point.system.total
    offsets = point.system.offsets
    generators = []
    for i in range(len(point.system.lengths)):
        for gen in _SO3_BASIS:
            vec = np.zeros((total, 3))
            vec[offsets[i]:offsets[i + 1]] = point.vectors[offsets[i]:offsets[i + 1]] @ gen.T
            generators.append(vec.reshape(-1))
    basis = orth(np.array(generators).T, rcond=tol.rank_rel_eps)
    return basis.T.reshape(-1, total, 3)


def symplectic_kernel_basis(point: PolygonPoint,
                            tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Kernel of the pairing on the tangent space, in ambient coordinates."""
    basis = polygon_tangent_basis(point, tol)
    gram = pairing_gram(point, basis)
    null = null_space(gram, rcond=tol.rank_rel_eps)
    flat = basis.reshape(len(basis), -1)
    return (null.T @ flat).reshape(-1, point.system.total, 3)


def subspace_max_angle(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Largest principal angle between two spans given as (D, ...) bases."""
    a = np.asarray(basis_a).reshape(len(basis_a), -1).T
    b = np.asarray(basis_b).reshape(len(basis_b), -1).T
    angles = subspace_angles(a, b)
    return float(np.max(angles)) if len(angles) else 0.0


# ---------------------------------------------------------------------------
# polyhedron schemes


def cycle_basis(s: GraphSurface) -> list[np.ndarray]:
    """Fundamental cycles of a spanning tree of the 1-skeleton.

    Returned as signed coefficient vectors over edge ids.  This basis spans
    the whole cycle space of the skeleton, which is a valid (over-complete)
    generator set: triangle relations already force their share to vanish.
    """
    n_edges = len(s.edges)
    adjacency: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(s.vertex_count)}
    for eid, (tail, head) in enumerate(s.edges):
        adjacency[tail].append((head, eid, +1))
        adjacency[head].append((tail, eid, -1))
    parent: dict[int, tuple[int, int, int] | None] = {0: None}
    stack = [0]
    tree_edges = set()
    while stack:
        v = stack.pop()
        for w, eid, direction in adjacency[v]:
            if w not in parent:
                parent[w] = (v, eid, direction)
                tree_edges.add(eid)
                stack.append(w)
    if len(parent) != s.vertex_count:
        raise DisconnectedError("surface skeleton is not connected")

    def root_chain(v: int) -> np.ndarray:
        """Signed edge chain of the tree path root -> v."""
        coeff = np.zeros(n_edges)
        while parent[v] is not None:
            up, eid, direction = parent[v]
            coeff[eid] += direction  # direction +1 iff the edge points up -> v
            v = up
        return coeff

    cycles = []
    for eid, (tail, head) in enumerate(s.edges):
        if eid in tree_edges:
            continue
        # closed walk: tail -> head along the edge, back through the tree
        coeff = np.zeros(n_edges)
        coeff[eid] = 1.0
        coeff -= root_chain(head)
        coeff += root_chain(tail)
        cycles.append(coeff)
    return cycles


@dataclass
class SurfaceRealization:
    """Edge-vector realization of a graph surface (one 3-vector per edge pair)."""

    surface: GraphSurface
    q: np.ndarray  # (n_edges, 3)

    def vector(self, ref: int) -> np.ndarray:
        eid, sign = ref_edge(ref)
        return sign * self.q[eid]


def _linear_constraint_rows(s: GraphSurface) -> np.ndarray:
    """Triangle-sum and cycle-sum rows (shared by realizations and tangents)."""
    n_edges = len(s.edges)
    rows = []
    for tri in s.triangles:
        block = np.zeros((3, 3 * n_edges))
        for ref in tri:
            eid, sign = ref_edge(ref)
            for c in range(3):
                block[c, 3 * eid + c] += sign
        rows.append(block)
    for coeff in cycle_basis(s):
        block = np.zeros((3, 3 * n_edges))
        for eid, value in enumerate(coeff):
            if value != 0.0:
                for c in range(3):
                    block[c, 3 * eid + c] += value
        rows.append(block)
    if not rows:
        return np.zeros((0, 3 * n_edges))
    return np.vstack(rows)


def surface_constraint_residual(s: GraphSurface, q: np.ndarray) -> float:
    """Max-norm residual of length, triangle and cycle constraints at q."""
    lengths = np.asarray(s.lengths, dtype=float)
    res = [np.abs(np.einsum("ij,ij->i", q, q) - lengths ** 2)]
    linear = _linear_constraint_rows(s)
    if len(linear):
        res.append(np.abs(linear @ q.reshape(-1)))
    return float(np.max(np.concatenate(res)))


def _project_to_constraints(s: GraphSurface, q: np.ndarray,
                            target: float = 1e-13, max_iter: int = 60) -> np.ndarray:
    linear = _linear_constraint_rows(s)
    lengths = np.asarray(s.lengths, dtype=float)
    x = q.reshape(-1).copy()
    n_edges = len(s.edges)
    for _ in range(max_iter):
        vecs = x.reshape(n_edges, 3)
        res_len = np.einsum("ij,ij->i", vecs, vecs) - lengths ** 2
        res_lin = linear @ x if len(linear) else np.zeros(0)
        residual = np.concatenate([res_len, res_lin])
        if float(np.max(np.abs(residual))) <= target:
            return x.reshape(n_edges, 3)
        jac_len = np.zeros((n_edges, 3 * n_edges))
        for j in range(n_edges):
            jac_len[j, 3 * j:3 * j + 3] = 2.0 * vecs[j]
        jac = np.vstack([jac_len, linear]) if len(linear) else jac_len
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        x = x + step
    raise ProjectionDivergedError("Gauss-Newton projection did not converge")


def realize_surface(s: GraphSurface, seed: int | None = None,
                    step: float = 0.15,
                    tol: Tolerance = DEFAULT_TOL) -> SurfaceRealization:
    """Realization from catalog coordinates, optionally perturbed on-manifold.

    With a seed, a random tangent step of the given size is taken and then
    reprojected onto the constraints by Gauss-Newton (residual <= 1e-12).
    """
    if s.coords is None:
        raise ValueError(f"surface {s.name} carries no reference coordinates")
    q = np.array([s.coords[head] - s.coords[tail] for tail, head in s.edges])
    realization = SurfaceRealization(s, q)
    if seed is None:
        return realization
    rng = np.random.default_rng(seed)
    basis = surface_tangent_basis(realization, tol)
    if len(basis) == 0:
        return realization
    weights = rng.normal(size=len(basis))
    direction = np.tensordot(weights, basis, axes=1)
    direction /= max(np.linalg.norm(direction), 1e-300)
    q = _project_to_constraints(s, q + step * direction)
    if surface_constraint_residual(s, q) > 1e-12:
        raise ProjectionDivergedError("projection residual above 1e-12")
    return SurfaceRealization(s, q)


def surface_tangent_basis(realization: SurfaceRealization,
                          tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (D, n_edges, 3) of the polyhedron scheme tangents."""
    s = realization.surface
    n_edges = len(s.edges)
    ortho = np.zeros((n_edges, 3 * n_edges))
    for j in range(n_edges):
        ortho[j, 3 * j:3 * j + 3] = realization.q[j]
    stacked = np.vstack([ortho, _linear_constraint_rows(s)])
    kernel = null_space(stacked, rcond=tol.rank_rel_eps)
    return kernel.T.reshape(-1, n_edges, 3)


def boundary_point(realization: SurfaceRealization) -> PolygonPoint:
    """Boundary polygons realized by precomposition with the boundary map."""
    s = realization.surface
    lengths = [np.array([float(s.lengths[abs(r) - 1]) for r in walk])
               for walk in s.walks]
    vectors = np.vstack([
        np.array([realization.vector(r) for r in walk]) for walk in s.walks
    ])
    return PolygonPoint(PolygonSystem(lengths), vectors)


def boundary_differential(realization: SurfaceRealization,
                          tangent: np.ndarray) -> np.ndarray:
    """Push a polyhedron tangent to a polygon tangent (precomposition)."""
    s = realization.surface
    tangent = np.asarray(tangent, dtype=float).reshape(len(s.edges), 3)
    rows = []
    for walk in s.walks:
        for r in walk:
            eid, sign = ref_edge(r)
            rows.append(sign * tangent[eid])
    return np.array(rows)


# ---------------------------------------------------------------------------
# certificates


def isotropy_certificate(s: GraphSurface, trials: int = 20,
                         seed: int = 0,
                         tol: Tolerance = DEFAULT_TOL) -> dict:
    """Max pairing of boundary-pushed tangents, relative to the ambient scale.

    For a consistently oriented surface the pushed-forward tangent pairs
    must pair to zero; the certificate reports the worst |pairing| over a
    full tangent basis at ``trials`` random on-manifold realizations,
    normalized by the largest pairing among all polygon tangents there.
    """
    s.validate()
    if not is_oriented_consistently(s):
        raise NotOrientableError(f"{s.name} is not consistently oriented")
    worst_rel = 0.0
    worst_abs = 0.0
    scale_seen = 0.0
    worst_residual = 0.0
    dims = set()
    for t in range(trials):
        realization = realize_surface(s, seed=seed + 7919 * t, tol=tol)
        worst_residual = max(worst_residual,
                             surface_constraint_residual(s, realization.q))
        basis = surface_tangent_basis(realization, tol)
        dims.add(len(basis))
        point = boundary_point(realization)
        images = np.array([boundary_differential(realization, b) for b in basis])
        gram_img = pairing_gram(point, images) if len(images) else np.zeros((0, 0))
        full = polygon_tangent_basis(point, tol)
        gram_full = pairing_gram(point, full)
        scale = float(np.max(np.abs(gram_full))) if gram_full.size else 0.0
        max_abs = float(np.max(np.abs(gram_img))) if gram_img.size else 0.0
        rel = max_abs / scale if scale > 1e-12 else max_abs
        worst_rel = max(worst_rel, rel)
        worst_abs = max(worst_abs, max_abs)
        scale_seen = max(scale_seen, scale)
    return {
        "surface": s.name,
        "trials": trials,
        "max_abs_pairing": worst_abs,
        "max_rel_pairing": worst_rel,
        "pairing_scale": scale_seen,
        "max_residual": worst_residual,
        "tangent_dims": sorted(dims),
        "passed": bool(worst_rel <= 1e-8),
    }


def _rank_with_gap(matrix: np.ndarray, rel_eps: float,
                   scale: float | None = None) -> dict:
    """Numerical rank with an auditable gap report.

    ``scale`` anchors the relative threshold (defaults to the matrix's own
    largest singular value); pass the pre-projection scale when ranking a
    projected matrix, so that a matrix annihilated by the projection reads
    as rank zero instead of full of noise.
    """
    spectrum = (np.linalg.svd(matrix, compute_uv=False)
                if matrix.size else np.zeros(0))
    smax = float(spectrum[0]) if len(spectrum) else 0.0
    if scale is None or scale <= 0.0:
        scale = smax
    rank = int(np.sum(spectrum > rel_eps * scale)) if scale > 0 else 0
    kept = float(spectrum[rank - 1] / scale) if rank > 0 else float("inf")
    dropped = float(spectrum[rank] / scale) if rank < len(spectrum) and scale > 0 else 0.0
    return {
        "rank": rank,
        "singular_values": [float(v) for v in spectrum],
        "kept_rel": kept,
        "dropped_rel": dropped,
        "threshold_rel": rel_eps,
        "gap_factor": (kept / rel_eps) if np.isfinite(kept) else float("inf"),
    }


def rank_certificate(s: GraphSurface, seed: int | None = 0,
                     tol: Tolerance = DEFAULT_TOL) -> dict:
    """Rank bounds of the boundary differential on a 3-rhombus-boundary surface.

    Reports the rank of the pushed tangents modulo the rotation-orbit
    directions (bound: 3 = floor(3m/2) for rhombus moduli dimension m = 2)
    and after projecting to the first two boundary factors (bound: 3 < 4).
    """
    s.validate()
    if len(s.walks) != 3 or any(len(w) != 4 for w in s.walks):
        raise BoundaryShapeMismatchError("need exactly three 4-gon boundaries")
    if np.max(np.abs(np.asarray(s.lengths) - 1.0)) > tol.geom_eps:
        raise BoundaryShapeMismatchError("boundary rhombi must have unit edges")
    realization = realize_surface(s, seed=seed, tol=tol)
    basis = surface_tangent_basis(realization, tol)
    point = boundary_point(realization)
    images = np.array([boundary_differential(realization, b).reshape(-1)
                       for b in basis])

    image_scale = float(np.linalg.svd(images, compute_uv=False)[0]) \
        if images.size else 0.0
    orbit = rotation_orbit_basis(point, tol).reshape(-1, 3 * point.system.total)
    proj = images - images @ orbit.T @ orbit
    moduli = _rank_with_gap(proj, tol.rank_rel_eps, scale=image_scale)

    two_point = PolygonPoint(PolygonSystem(point.system.lengths[:2]),
                             point.vectors[:8])
    images_two = images.reshape(len(images), point.system.total, 3)[:, :8, :]
    images_two = images_two.reshape(len(images), -1)
    orbit_two = rotation_orbit_basis(two_point, tol).reshape(-1, 24)
    proj_two = images_two - images_two @ orbit_two.T @ orbit_two
    projected = _rank_with_gap(proj_two, tol.rank_rel_eps, scale=image_scale)

    one_point = PolygonPoint(PolygonSystem(point.system.lengths[:1]),
                             point.vectors[:4])
    scheme_dim = len(polygon_tangent_basis(one_point, tol))
    orbit_dim = len(rotation_orbit_basis(one_point, tol))
    m = scheme_dim - orbit_dim

    passed = (moduli["rank"] <= 3 and projected["rank"] <= 3
              and m == 2
              and moduli["gap_factor"] >= 10.0
              and projected["gap_factor"] >= 10.0)
    return {
        "surface": s.name,
        "rhombus_moduli_dim": m,
        "rank_moduli": moduli,
        "rank_projected": projected,
        "bound_moduli": 3,
        "bound_projected": 4,
        "max_residual": surface_constraint_residual(s, realization.q),
        "tangent_dim": len(basis),
        "passed": bool(passed),
    }
