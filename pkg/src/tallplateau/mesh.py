"""Triangle meshes in the Poincare disk model of H^2, optionally with heights."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

# symmetric 3-point rule on the reference triangle (exact for quadratics)
QUAD_BARY = np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]])
QUAD_W = np.full(3, 1 / 3)


def conformal_factor(xy: np.ndarray) -> np.ndarray:
    """lambda = 2 / (1 - |x|^2), so the disk metric is lambda^2 |dx|^2."""
    r2 = np.sum(np.asarray(xy) ** 2, axis=-1)
    return 2.0 / (1.0 - r2)


@dataclass
class Mesh:
    """Vertices (N, 2) or (N, 3) and triangles (M, 3)."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.triangles = np.asarray(self.triangles, dtype=int)

    @property
    def xy(self) -> np.ndarray:
        return self.vertices[:, :2]

    def with_heights(self, z: np.ndarray) -> "Mesh":
        return Mesh(np.column_stack([self.xy, z]), self.triangles)

    def boundary_edges(self) -> np.ndarray:
        t = self.triangles
        e = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        return uniq[counts == 1]

    def boundary_vertices(self) -> np.ndarray:
        return np.unique(self.boundary_edges())

    def max_edge_hyperbolic(self) -> float:
        from .hyperbolic import disk_distance

        t = self.triangles
        p = self.xy
        best = 0.0
        for i, j in ((0, 1), (1, 2), (2, 0)):
            best = max(best, float(np.max(disk_distance(p[t[:, i]], p[t[:, j]]))))
        return best

    def hyperbolic_areas(self) -> np.ndarray:
        """Per-triangle area of the flat disk-model triangle in the H^2 metric."""
        p = self.xy[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        jac = np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]) / 2.0
        pts = np.einsum("qk,mkd->mqd", QUAD_BARY, p)
        lam2 = conformal_factor(pts) ** 2
        return jac * (lam2 @ QUAD_W)

    def surface_areas(self) -> np.ndarray:
        """Per-triangle area of the embedded surface in H^2 x R."""
        if self.vertices.shape[1] < 3:
            return self.hyperbolic_areas()
        v = self.vertices[self.triangles]
        e1 = v[:, 1] - v[:, 0]
        e2 = v[:, 2] - v[:, 0]
        pts = np.einsum("qk,mkd->mqd", QUAD_BARY, v[:, :, :2])
        lam2 = conformal_factor(pts) ** 2  # (M, q)
        # Gram matrix of e1, e2 in the metric diag(lam^2, lam^2, 1)
        h11 = np.sum(e1[:, :2] ** 2, axis=1)
        h22 = np.sum(e2[:, :2] ** 2, axis=1)
        h12 = np.sum(e1[:, :2] * e2[:, :2], axis=1)
        g11 = lam2 * h11[:, None] + (e1[:, 2] ** 2)[:, None]
        g22 = lam2 * h22[:, None] + (e2[:, 2] ** 2)[:, None]
        g12 = lam2 * h12[:, None] + (e1[:, 2] * e2[:, 2])[:, None]
        det = np.maximum(g11 * g22 - g12**2, 0.0)
        return 0.5 * (np.sqrt(det) @ QUAD_W)

    def area(self) -> float:
        return float(np.sum(self.surface_areas()))

    def to_obj(self) -> str:
        buf = io.StringIO()
        buf.write("# disk-model coordinates x y, height z\n")
        v = self.vertices if self.vertices.shape[1] == 3 else np.column_stack([self.vertices, np.zeros(len(self.vertices))])
        for x, y, z in v:
            buf.write(f"v {x:.12g} {y:.12g} {z:.12g}\n")
        for a, b, c in self.triangles + 1:
            buf.write(f"f {a} {b} {c}\n")
        return buf.getvalue()

    def write_obj(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_obj())


def structured_triangles(nu: int, nv: int, periodic_v: bool = False) -> np.ndarray:
    """Triangles of an (nu+1) x (nv+1) grid (or nv columns if periodic), row-major in u."""
    cols = nv if periodic_v else nv + 1
    tris = []
    for i in range(nu):
        for j in range(nv):
            jn = (j + 1) % cols if periodic_v else j + 1
            a, b = i * cols + j, i * cols + jn
            c, d = a + cols, b + cols
            # alternate diagonals to avoid a directional bias
            if (i + j) % 2 == 0:
                tris += [(a, b, d), (a, d, c)]
            else:
                tris += [(a, b, c), (b, d, c)]
    return np.array(tris, dtype=int)
