"""Exact differential geometry of the Heisenberg group H^n.

Frame order is (X_1..X_n, Y_1..Y_n, R) and global coordinates are
(x_1..x_n, y_1..y_n, z), with

    X_i = d/dx_i + (y_i/2) d/dz,   Y_i = d/dy_i - (x_i/2) d/dz,   R = d/dz.

The Levi-Civita table is derived once from the structure constants by the
Koszul formula (inner products of frame fields are constant, so only the
bracket terms survive); the Tanaka table is obtained from it by the canonical
almost-contact correction.  Both are constant in the frame, which makes every
curvature quantity an exact rational number.  The geometry API is expressed
through frame/bracket/table accessors so that a different Sasakian example
could be plugged in without touching consumers; only H^n is provided.

All operations are pure functions; batched variants take arrays whose last
axis is the frame/coordinate index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fields import Field, coordinate
from .jets import Jet

__all__ = [
    "HPoint", "HTangent", "ConnectionTable", "dim_of", "r_index",
    "frame_at", "frame_matrix", "coords_to_frame", "frame_to_coords",
    "bracket", "structure_constants", "build_connection_tables",
    "j_matrix", "j_apply", "contact_form", "covariant_derivative",
    "riemann", "curvature_tensor", "ric_hor", "ric_ver", "tanaka_ric",
    "grad", "grad_hor", "grad_ver", "hessian", "sub_laplacian",
    "FrameVectorField", "frame_deriv_field", "gradient_components",
    "sub_laplacian_field", "nabla_matrix", "sub_laplacian_via_fields",
]


def dim_of(n: int) -> int:
    return 2 * n + 1


def r_index(n: int) -> int:
    return 2 * n


# ---------------------------------------------------------------------------
# points and tangent vectors


@dataclass(frozen=True)
class HPoint:
    """A point of H^n in global coordinates (x_1..x_n, y_1..y_n, z)."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.shape[0] % 2 == 0:
            raise ValueError("coords must be a vector of odd length 2n+1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coords must be finite")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return (self.coords.shape[0] - 1) // 2


@dataclass(frozen=True)
class HTangent:
    """Tangent vector in frame components, split into horizontal h and vertical v."""

    base: HPoint
    h: np.ndarray
    v: float

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (2 * self.base.n,):
            raise ValueError("horizontal part must have length 2n")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", float(self.v))

    @property
    def frame_components(self) -> np.ndarray:
        return np.concatenate([self.h, [self.v]])

    @staticmethod
    def from_components(base: HPoint, comps: np.ndarray) -> "HTangent":
        comps = np.asarray(comps, dtype=float)
        return HTangent(base, comps[:-1], comps[-1])

    def norm_sq(self) -> float:
        # frame is orthonormal: |w|^2 = |h|^2 + v^2
        return float(self.h @ self.h + self.v * self.v)


# ---------------------------------------------------------------------------
# frame fields and conversions


def frame_matrix(pts: np.ndarray, n: int) -> np.ndarray:
    """Rows are the coordinate components of (X_1..X_n, Y_1..Y_n, R) at pts."""
    pts = np.asarray(pts, dtype=float)
    d = dim_of(n)
    E = np.zeros(pts.shape[:-1] + (d, d))
    for i in range(n):
        E[..., i, i] = 1.0
        E[..., i, d - 1] = 0.5 * pts[..., n + i]
        E[..., n + i, n + i] = 1.0
        E[..., n + i, d - 1] = -0.5 * pts[..., i]
    E[..., d - 1, d - 1] = 1.0
    return E


def frame_at(p: HPoint, n: int) -> list[np.ndarray]:
    """The 2n+1 frame vectors at p as coordinate vectors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    E = frame_matrix(p.coords, n)
    return [E[a] for a in range(dim_of(n))]


def frame_to_coords(w_frame: np.ndarray, pts: np.ndarray, n: int) -> np.ndarray:
    return np.einsum("...a,...am->...m", w_frame, frame_matrix(pts, n))


def coords_to_frame(w_coords: np.ndarray, pts: np.ndarray, n: int) -> np.ndarray:
    """Invert the frame matrix in closed form (it is unipotent-affine)."""
    pts = np.asarray(pts, dtype=float)
    w = np.asarray(w_coords, dtype=float)
    out = w.copy()
    zc = dim_of(n) - 1
    corr = np.zeros(np.broadcast_shapes(w[..., 0].shape, pts[..., 0].shape))
    for i in range(n):
        corr = corr + 0.5 * pts[..., n + i] * w[..., i] \
                    - 0.5 * pts[..., i] * w[..., n + i]
    out[..., zc] = w[..., zc] - corr
    return out


# ---------------------------------------------------------------------------
# structure constants and connection tables


@lru_cache(maxsize=None)
def structure_constants(n: int) -> np.ndarray:
    """C[a,b,d] with [e_a, e_b] = sum_d C[a,b,d] e_d; only [X_i,Y_i] = -R."""
    d = dim_of(n)
    C = np.zeros((d, d, d))
    for i in range(n):
        C[i, n + i, d - 1] = -1.0
        C[n + i, i, d - 1] = 1.0
    return C


def bracket(a: int, b: int, n: int = 1) -> np.ndarray:
    """[e_a, e_b] in frame components (constant over the group)."""
    C = structure_constants(n)
    d = dim_of(n)
    if not (0 <= a < d and 0 <= b < d):
        raise IndexError("frame index out of range")
    return C[a, b].copy()


@lru_cache(maxsize=None)
def j_matrix(n: int) -> np.ndarray:
    """(J e_a) = sum_b Jm[a,b] e_b with J X_i = -Y_i, J Y_i = X_i, J R = 0."""
    d = dim_of(n)
    Jm = np.zeros((d, d))
    for i in range(n):
        Jm[i, n + i] = -1.0
        Jm[n + i, i] = 1.0
    return Jm


@dataclass(frozen=True)
class ConnectionTable:
    """Constant coefficients gamma[a,b,c] = <nabla_{e_a} e_b, e_c> for both connections."""

    n: int
    gamma: np.ndarray
    tanaka_gamma: np.ndarray

    def table(self, connection: str) -> np.ndarray:
        if connection == "levi_civita":
            return self.gamma
        if connection == "tanaka":
            return self.tanaka_gamma
        raise ValueError(f"unknown connection {connection!r}")


@lru_cache(maxsize=None)
def build_connection_tables(n: int) -> ConnectionTable:
    """Koszul formula over constant structure coefficients, then the Tanaka correction."""
    if n < 1:
        raise ValueError("n must be >= 1")
    C = structure_constants(n)
    # 2<nabla_a e_b, e_c> = <[e_a,e_b],e_c> - <[e_b,e_c],e_a> + <[e_c,e_a],e_b>
    gamma = 0.5 * (C - np.einsum("bca->abc", C) + np.einsum("cab->abc", C))
    Jm = j_matrix(n)
    d = dim_of(n)
    rz = d - 1
    delta_r = np.zeros(d)
    delta_r[rz] = 1.0
    tanaka = (gamma
              + 0.5 * np.einsum("a,bc->abc", delta_r, Jm)
              + 0.5 * np.einsum("b,ac->abc", delta_r, Jm)
              - 0.5 * np.einsum("ab,c->abc", Jm, delta_r))
    return ConnectionTable(n, gamma, tanaka)


# ---------------------------------------------------------------------------
# J, contact form


def j_apply(w: HTangent) -> HTangent:
    comps = w.frame_components @ j_matrix(w.base.n)
    return HTangent.from_components(w.base, comps)


def contact_form(w: HTangent) -> float:
    """alpha(w): the R-component; alpha(R)=1 and alpha vanishes on D."""
    return float(w.v)


# ---------------------------------------------------------------------------
# curvature (frame-constant extensions; tensorial, so extension independent)


@lru_cache(maxsize=None)
def curvature_tensor(n: int, connection: str = "levi_civita") -> np.ndarray:
    """R[a,b,c,d] = <Rm(e_a,e_b)e_c, e_d>."""
    tables = build_connection_tables(n)
    G = tables.table(connection)
    C = structure_constants(n)
    term1 = np.einsum("bce,aed->abcd", G, G)
    term2 = np.einsum("ace,bed->abcd", G, G)
    term3 = np.einsum("abe,ecd->abcd", C, G)
    return term1 - term2 - term3


def riemann(w1: HTangent, w2: HTangent, w3: HTangent,
            connection: str = "levi_civita") -> HTangent:
    n = w1.base.n
    Rt = curvature_tensor(n, connection)
    comps = np.einsum("a,b,c,abcd->d", w1.frame_components,
                      w2.frame_components, w3.frame_components, Rt)
    return HTangent.from_components(w1.base, comps)


@lru_cache(maxsize=None)
def _ric_matrices(n: int):
    Rt = curvature_tensor(n)
    hor = list(range(2 * n))
    ver = [2 * n]
    ric_h = sum(Rt[a, :, :, a] for a in hor)
    ric_v = sum(Rt[a, :, :, a] for a in ver)
    Rtt = curvature_tensor(n, "tanaka")
    ric_t = sum(Rtt[a, :, :, a] for a in range(dim_of(n)))
    return ric_h, ric_v, ric_t


def ric_hor(v: HTangent, w: HTangent | None = None) -> float:
    """Trace of u -> <Rm(u,v)w,u> over the horizontal frame (w defaults to v)."""
    M = _ric_matrices(v.base.n)[0]
    b = v.frame_components
    c = b if w is None else w.frame_components
    return float(b @ M @ c)


def ric_ver(v: HTangent, w: HTangent | None = None) -> float:
    M = _ric_matrices(v.base.n)[1]
    b = v.frame_components
    c = b if w is None else w.frame_components
    return float(b @ M @ c)


def tanaka_ric(v: HTangent, w: HTangent | None = None) -> float:
    M = _ric_matrices(v.base.n)[2]
    b = v.frame_components
    c = b if w is None else w.frame_components
    return float(b @ M @ c)


# ---------------------------------------------------------------------------
# differential operators on analytic fields (numeric fast path)

# dE[mu, b, nu] = d/dx_mu of the frame coefficient E[b, nu]; the only varying
# coefficients are the z-columns of X_i (0.5*y_i) and Y_i (-0.5*x_i).


@lru_cache(maxsize=None)
def _frame_matrix_derivative(n: int) -> np.ndarray:
    d = dim_of(n)
    dE = np.zeros((d, d, d))
    for i in range(n):
        dE[n + i, i, d - 1] = 0.5
        dE[i, n + i, d - 1] = -0.5
    return dE


def _as_pts(p):
    if isinstance(p, HPoint):
        return p.coords
    return np.asarray(p, dtype=float)


def grad(f: Field, p, n: int) -> np.ndarray:
    """Gradient in frame components: (e_1 f, ..., e_{2n+1} f)."""
    pts = _as_pts(p)
    jf = f.jet(pts, order=1)
    return np.einsum("...am,...m->...a", frame_matrix(pts, n), jf.g)


def grad_hor(f: Field, p, n: int) -> np.ndarray:
    g = grad(f, p, n)
    g = g.copy()
    g[..., r_index(n)] = 0.0
    return g


def grad_ver(f: Field, p, n: int) -> np.ndarray:
    g = np.zeros_like(grad(f, p, n))
    gv = grad(f, p, n)
    g[..., r_index(n)] = gv[..., r_index(n)]
    return g


def hessian(f: Field, p, n: int, connection: str = "levi_civita") -> np.ndarray:
    """Hess f (e_a, e_b) = e_a(e_b f) - (nabla_{e_a} e_b) f, as a (2n+1)^2 matrix."""
    pts = _as_pts(p)
    jf = f.jet(pts, order=2)
    E = frame_matrix(pts, n)
    dE = _frame_matrix_derivative(n)
    second = np.einsum("...am,...bn,...mn->...ab", E, E, jf.h)
    first = np.einsum("...am,mbn,...n->...ab", E, dE, jf.g)
    gamma = build_connection_tables(n).table(connection)
    ef = np.einsum("...cm,...m->...c", E, jf.g)
    conn = np.einsum("abc,...c->...ab", gamma, ef)
    return second + first - conn


def sub_laplacian(f: Field, p, n: int) -> np.ndarray:
    """Trace of the Hessian over the horizontal frame."""
    H = hessian(f, p, n)
    idx = np.arange(2 * n)
    return H[..., idx, idx].sum(axis=-1)


def covariant_derivative(w: HTangent, F: "FrameVectorField",
                         connection: str = "levi_civita") -> HTangent:
    """nabla_w F at the base point of w, Leibniz rule over the connection table."""
    n = w.base.n
    pts = w.base.coords
    M = nabla_matrix(F, pts, n, connection)
    comps = w.frame_components @ M
    return HTangent.from_components(w.base, comps)


# ---------------------------------------------------------------------------
# vector fields with analytic frame components


class FrameVectorField:
    """Vector field given by 2n+1 analytic frame-component functions."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components):
        d = dim_of(n)
        comps = list(components)
        if len(comps) != d:
            raise ValueError("need one component field per frame member")
        self.n = n
        self.components = comps

    @staticmethod
    def from_constant(n: int, comps: np.ndarray) -> "FrameVectorField":
        from .fields import const as _const
        comps = np.asarray(comps, dtype=float)
        return FrameVectorField(n, [_const(dim_of(n), comps[a])
                                    for a in range(dim_of(n))])

    def eval(self, pts: np.ndarray) -> np.ndarray:
        vals = [c.value(pts) for c in self.components]
        return np.stack(np.broadcast_arrays(*vals), axis=-1)

    def at(self, p: HPoint) -> HTangent:
        return HTangent.from_components(p, self.eval(p.coords))

    def j_applied(self) -> "FrameVectorField":
        Jm = j_matrix(self.n)
        comps = []
        for b in range(dim_of(self.n)):
            acc = None
            for a in range(dim_of(self.n)):
                if Jm[a, b] != 0.0:
                    term = Jm[a, b] * self.components[a]
                    acc = term if acc is None else acc + term
            comps.append(acc if acc is not None else 0.0 * self.components[0])
        return FrameVectorField(self.n, comps)

    def horizontal(self) -> "FrameVectorField":
        comps = list(self.components)
        comps[r_index(self.n)] = 0.0 * comps[r_index(self.n)]
        return FrameVectorField(self.n, comps)


def frame_deriv_field(f: Field, a: int, n: int) -> Field:
    """The scalar field e_a f, built in closed form (costs one jet order)."""
    d = dim_of(n)
    zc = d - 1
    if a == zc:
        return f.partial(zc)
    if a < n:  # X_i
        return f.partial(a) + 0.5 * coordinate(d, n + a) * f.partial(zc)
    i = a - n  # Y_i
    return f.partial(a) - 0.5 * coordinate(d, i) * f.partial(zc)


def gradient_components(f: Field, n: int) -> FrameVectorField:
    return FrameVectorField(n, [frame_deriv_field(f, a, n)
                                for a in range(dim_of(n))])


def sub_laplacian_field(f: Field, n: int) -> Field:
    """Delta_hor f as a field; on H^n the horizontal frame is self-parallel."""
    acc = None
    for a in range(2 * n):
        term = frame_deriv_field(frame_deriv_field(f, a, n), a, n)
        acc = term if acc is None else acc + term
    return acc


def sub_laplacian_via_fields(f: Field, pts, n: int) -> np.ndarray:
    """Independent evaluation path for Delta_hor, used to cross-check hessian()."""
    return sub_laplacian_field(f, n).value(_as_pts(pts))


def nabla_matrix(F: FrameVectorField, pts: np.ndarray, n: int,
                 connection: str = "levi_civita") -> np.ndarray:
    """M[a,b] = <nabla_{e_a} F, e_b> at pts."""
    pts = _as_pts(pts)
    gamma = build_connection_tables(n).table(connection)
    d = dim_of(n)
    Fv = F.eval(pts)
    rows = []
    for b in range(d):
        col = [frame_deriv_field(F.components[b], a, n).value(pts)
               for a in range(d)]
        rows.append(np.stack(np.broadcast_arrays(*col), axis=-1))
    dF = np.stack(rows, axis=-1)  # (..., a, b) = e_a F^b
    conn = np.einsum("...c,acb->...ab", Fv, gamma)
    return dF + conn


def bracket_fields(F: FrameVectorField, G: FrameVectorField) -> FrameVectorField:
    """[F, G] via coordinate components; exact for analytic components."""
    n = F.n
    d = dim_of(n)
    zc = d - 1

    def to_coords(V: FrameVectorField) -> list[Field]:
        comps = list(V.components)
        zfield = comps[zc]
        for i in range(n):
            zfield = zfield + 0.5 * coordinate(d, n + i) * comps[i] \
                            - 0.5 * coordinate(d, i) * comps[n + i]
        return comps[:zc] + [zfield]

    Fc, Gc = to_coords(F), to_coords(G)
    Bc = []
    for mu in range(d):
        acc = None
        for nu in range(d):
            term = Fc[nu] * Gc[mu].partial(nu) - Gc[nu] * Fc[mu].partial(nu)
            acc = term if acc is None else acc + term
        Bc.append(acc)
    # back to frame components
    zfield = Bc[zc]
    for i in range(n):
        zfield = zfield - 0.5 * coordinate(d, n + i) * Bc[i] \
                        + 0.5 * coordinate(d, i) * Bc[n + i]
    return FrameVectorField(n, Bc[:zc] + [zfield])
