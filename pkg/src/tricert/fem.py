"""P1 conforming and Crouzeix-Raviart nonconforming spaces on a triangle mesh.

Two boundary treatments are supported:

* ``dirichlet``: zero trace.  For the conforming space this removes
  boundary nodes; for CR it removes boundary-edge dofs (the dof is the
  edge mean, and a broken linear with zero edge mean on a boundary edge
  is the natural CR notion of zero trace).
* ``edge-mean``: the integral of v over each of the three parent sides
  vanishes.  This is a three-dimensional constraint handled by an
  explicit null-space basis Z, one slave dof per side, so reduced
  operators are congruent transforms Z^T K Z of the full ones.

All matrices are assembled from exact closed-form integrals of the
polynomial integrands; no quadrature error enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .mesh import Mesh
from .rounding import dn

FAMILIES = ("cg", "cr")
BCS = ("dirichlet", "edge-mean")


@dataclass(frozen=True)
class FemSpace:
    mesh: Mesh
    family: str
    bc: str
    full_dim: int
    dof_count: int
    free: np.ndarray | None      # dirichlet: retained dof indices
    Z: sp.csr_matrix | None      # edge-mean: explicit null-space basis

    def reduce(self, K: sp.csr_matrix) -> sp.csr_matrix:
        if self.free is not None:
            return K[self.free][:, self.free].tocsr()
        return (self.Z.T @ K @ self.Z).tocsr()

    def prolong(self, u: np.ndarray) -> np.ndarray:
        """Reduced coefficient vector -> full dof vector."""
        if self.free is not None:
            full = np.zeros(self.full_dim)
            full[self.free] = u
            return full
        return self.Z @ u


def build_space(mesh: Mesh, family: str, bc: str) -> FemSpace:
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if bc not in BCS:
        raise ValueError(f"bc must be one of {BCS}, got {bc!r}")

    full_dim = mesh.n_nodes if family == "cg" else mesh.n_edges

    if bc == "dirichlet":
        if family == "cg":
            free = np.nonzero(~mesh.boundary_node_mask())[0]
        else:
            free = np.nonzero(mesh.edge_side == -1)[0]
        if free.size == 0:
            raise ValueError(
                f"{family}/dirichlet space on n={mesh.n} has dimension 0; refine the mesh"
            )
        return FemSpace(mesh, family, bc, full_dim, int(free.size), free, None)

    Z = _edge_mean_nullspace(mesh, family, full_dim)
    if Z.shape[1] == 0:
        raise ValueError(
            f"{family}/edge-mean space on n={mesh.n} has dimension 0; refine the mesh"
        )
    return FemSpace(mesh, family, bc, full_dim, int(Z.shape[1]), None, Z)


def _edge_mean_nullspace(mesh: Mesh, family: str, full_dim: int) -> sp.csr_matrix:
    """Null-space basis of the three side-mean constraints.

    Constraint s involves only side-s dofs, and the slave chosen for it
    appears in no other constraint, so eliminating each slave from its
    own constraint satisfies all three simultaneously.  Constant side
    factors are dropped; they do not change the null space.
    """
    constraints: list[tuple[int, np.ndarray, np.ndarray]] = []  # slave, masters, weights
    for s in range(3):
        if family == "cg":
            nd = mesh.side_nodes(s)
            if nd.size < 3:
                # no interior side node available as a slave
                raise ValueError(
                    f"cg/edge-mean needs n >= 2 sub-edges per side, mesh has n={mesh.n}"
                )
            # trapezoid weights, exact for functions linear on each sub-edge
            w = np.ones(nd.size)
            w[0] = w[-1] = 0.5
            slave_pos = 1
            dofs = nd
        else:
            dofs = mesh.side_edges(s)
            if dofs.size < 2:
                raise ValueError(
                    f"cr/edge-mean needs n >= 2 sub-edges per side, mesh has n={mesh.n}"
                )
            w = np.ones(dofs.size)
            slave_pos = 0
        slave = int(dofs[slave_pos])
        mask = np.arange(dofs.size) != slave_pos
        constraints.append((slave, dofs[mask], -w[mask] / w[slave_pos]))

    slaves = sorted(c[0] for c in constraints)
    if len(set(slaves)) != 3:
        raise AssertionError("slave dofs must be distinct")
    masters = np.setdiff1d(np.arange(full_dim), slaves)
    col_of = {int(m): k for k, m in enumerate(masters)}

    rows = list(masters)
    cols = list(range(masters.size))
    vals = [1.0] * masters.size
    for slave, mdofs, mw in constraints:
        for d, wv in zip(mdofs, mw):
            rows.append(slave)
            cols.append(col_of[int(d)])
            vals.append(float(wv))
    Z = sp.coo_matrix((vals, (rows, cols)), shape=(full_dim, masters.size))
    return Z.tocsr()


@dataclass(frozen=True)
class DiscreteOperators:
    """Reduced stiffness/mass family for one space.

    A is the full gradient-gram (stiffness), M the mass matrix, and
    Kxx, Kxy, Kyy the partial-derivative grams, so A = Kxx + Kyy holds
    as an assembly identity.  Kxy is stored as assembled (row index
    differentiates in x, column in y); only its quadratic form is used.
    """

    space: FemSpace
    A: sp.csr_matrix
    M: sp.csr_matrix
    Kxx: sp.csr_matrix
    Kxy: sp.csr_matrix
    Kyy: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def mass_min_eig_lower(self) -> float:
        """Certified lower bound on the smallest eigenvalue of M.

        Element mass matrices satisfy M_e >= (area_e/12) I for P1 and
        M_e = (area_e/3) I for CR, so the assembled M dominates
        (min area)/12 resp. /3 times the identity.  Dirichlet reduction
        is a principal submatrix (interlacing) and the edge-mean basis
        has Z^T Z = I + W^T W >= I, so the bound survives reduction.
        """
        tri = self.space.mesh.triangle
        n = self.space.mesh.n
        area_low = dn(dn(0.5 * tri.by, 2) / (n * n), 2)
        return area_low / 12.0 if self.space.family == "cg" else dn(area_low / 3.0)

    def gram_triple(self, u: np.ndarray) -> tuple[float, float, float]:
        """(||u_x||^2, (u_x, u_y), ||u_y||^2) for reduced coefficients u."""
        return (
            float(u @ (self.Kxx @ u)),
            float(u @ (self.Kxy @ u)),
            float(u @ (self.Kyy @ u)),
        )

    def dump(self, path_prefix: str) -> None:
        """Coordinate-format text dump, one file per matrix."""
        for name in ("A", "M", "Kxx", "Kxy", "Kyy"):
            mat = getattr(self, name).tocoo()
            with open(f"{path_prefix}_{name}.txt", "w") as f:
                f.write(f"% {mat.shape[0]} {mat.shape[1]} {mat.nnz}\n")
                for i, j, v in zip(mat.row, mat.col, mat.data):
                    f.write(f"{i} {j} {float(v)!r}\n")


def assemble(space: FemSpace) -> DiscreteOperators:
    """Assemble reduced stiffness, mass and partial-derivative grams.

    Notes
    -----
    With CCW vertices p0, p1, p2 and e_k the edge opposite vertex k,
    grad lambda_k = rot(e_k) / (2 area) with rot(x, y) = (y, -x).  The
    CR basis on the edge opposite vertex k is psi_k = 1 - 2 lambda_k,
    so its gradient grams are 4 times the P1 ones with edge indexing,
    and its mass matrix is exactly (area/3) I.
    """
    mesh = space.mesh
    v = mesh.nodes[mesh.elements]                      # (ne, 3, 2)
    e = v[:, [1, 2, 0], :] - v[:, [2, 0, 1], :]        # e[:, k] = p_{k+1} - p_{k+2}
    area2 = e[:, 1, 0] * e[:, 2, 1] - e[:, 1, 1] * e[:, 2, 0]
    if np.any(area2 <= 0.0):
        raise AssertionError("element orientation must be counterclockwise")
    grads = np.stack([e[..., 1], -e[..., 0]], axis=-1) / area2[:, None, None]
    area = 0.5 * area2

    gx = grads[..., 0]
    gy = grads[..., 1]
    w = area[:, None, None]
    loc_xx = w * np.einsum("ek,el->ekl", gx, gx)
    loc_xy = w * np.einsum("ek,el->ekl", gx, gy)
    loc_yy = w * np.einsum("ek,el->ekl", gy, gy)
    loc_a = w * np.einsum("eki,eli->ekl", grads, grads)

    if space.family == "cg":
        conn = mesh.elements
        mass_loc = (area[:, None, None] / 12.0) * (np.ones((3, 3)) + np.eye(3))
    else:
        conn = mesh.element_edges
        loc_xx = 4.0 * loc_xx
        loc_xy = 4.0 * loc_xy
        loc_yy = 4.0 * loc_yy
        loc_a = 4.0 * loc_a
        mass_loc = (area[:, None, None] / 3.0) * np.eye(3)

    rows = np.repeat(conn, 3, axis=1).ravel()
    cols = np.tile(conn, (1, 3)).ravel()
    shape = (space.full_dim, space.full_dim)

    def build(loc):
        return sp.coo_matrix((loc.ravel(), (rows, cols)), shape=shape).tocsr()

    return DiscreteOperators(
        space,
        A=space.reduce(build(loc_a)),
        M=space.reduce(build(mass_loc)),
        Kxx=space.reduce(build(loc_xx)),
        Kxy=space.reduce(build(loc_xy)),
        Kyy=space.reduce(build(loc_yy)),
    )
