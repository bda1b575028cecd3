"""Randomized numerical verification of the stated tensor identities on H^n.

Each check evaluates both sides of an identity at a seeded batch of random
points, with random analytic test functions and random frame-component vector
fields, and reports the worst absolute residual.  Fields are O(1) by
construction, so residuals are absolute.

Two conventions are fixed here and recorded in the emitted results:

* the exterior derivative is dα(w1,w2) = w1(α(w2)) - w2(α(w1)) - α([w1,w2]),
  i.e. without the 1/2 normalization some references use; this is the
  convention under which <w1, Jw2> = dα(w1, w2) holds exactly;
* the curvature fact 13 is verified in its (i,k) form; on H^n there is a
  single vertical direction, so the header variant (reported as ``13h``)
  coincides with it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from . import jets
from .fields import Field, const, random_polytrig_field
from .geometry import FrameVectorField, dim_of, r_index

__all__ = ["IdentityResult", "verify_fact", "verify_sasakian_prop",
           "verify_contact_axioms", "verify_horizontal_isometry",
           "verify_prop26", "run_all", "FACT_IDS"]

FACT_IDS = list(range(1, 14))


@dataclass(frozen=True)
class IdentityResult:
    identity_id: str
    samples: int
    max_residual: float
    worst_point: np.ndarray

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.max_residual >= 0.0:
            raise ValueError("max_residual must be nonnegative")


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, tag])


def _points(rng, trials, n):
    return rng.uniform(-1.0, 1.0, size=(trials, dim_of(n)))


def _result(identity_id, residuals, pts) -> IdentityResult:
    residuals = np.asarray(residuals)
    worst = int(np.argmax(residuals))
    return IdentityResult(identity_id, residuals.shape[0],
                          float(residuals[worst]), pts[worst].copy())


def _random_field(n, rng, trials) -> Field:
    return random_polytrig_field(dim_of(n), rng, (trials,))


def _random_horizontal_vf(n, rng, trials) -> FrameVectorField:
    d = dim_of(n)
    comps = [_random_field(n, rng, trials) for _ in range(2 * n)]
    comps.append(const(d, 0.0))
    return FrameVectorField(n, comps)


def _random_vertical_vf(n, rng, trials) -> FrameVectorField:
    d = dim_of(n)
    comps = [const(d, 0.0) for _ in range(2 * n)]
    comps.append(_random_field(n, rng, trials))
    return FrameVectorField(n, comps)


def _random_full_vf(n, rng, trials) -> FrameVectorField:
    return FrameVectorField(n, [_random_field(n, rng, trials)
                                for _ in range(dim_of(n))])


def _reeb_vf(n) -> FrameVectorField:
    comps = np.zeros(dim_of(n))
    comps[r_index(n)] = 1.0
    return FrameVectorField.from_constant(n, comps)


def _dot_field(F: FrameVectorField, G: FrameVectorField) -> Field:
    acc = None
    for a in range(dim_of(F.n)):
        term = F.components[a] * G.components[a]
        acc = term if acc is None else acc + term
    return acc


def _gs_horizontal_frame(n, rng, trials) -> list[FrameVectorField]:
    """Orthonormal horizontal frame fields: group frame plus a smooth random
    perturbation, orthonormalized by modified Gram-Schmidt in field algebra."""
    d = dim_of(n)
    raw = []
    for j in range(2 * n):
        comps = []
        for a in range(d):
            if a == r_index(n):
                comps.append(const(d, 0.0))
            else:
                base = 1.0 if a == j else 0.0
                comps.append(const(d, base)
                             + 0.15 * _random_field(n, rng, trials))
        raw.append(FrameVectorField(n, comps))
    frame = []
    for w in raw:
        for v in frame:
            proj = _dot_field(w, v)
            w = FrameVectorField(n, [w.components[a] - proj * v.components[a]
                                     for a in range(d)])
        inv_norm = 1.0 / _dot_field(w, w).apply(jets.sqrt)
        frame.append(FrameVectorField(
            n, [w.components[a] * inv_norm for a in range(d)]))
    return frame


def _dalpha_values(w1: FrameVectorField, w2: FrameVectorField,
                   pts: np.ndarray):
    """dα(w1,w2) = w1(α(w2)) - w2(α(w1)) - α([w1,w2]) at pts."""
    n = w1.n
    rz = r_index(n)
    a2 = geo.gradient_components(w2.components[rz], n)
    a1 = geo.gradient_components(w1.components[rz], n)
    t1 = np.einsum("...a,...a->...", w1.eval(pts), a2.eval(pts))
    t2 = np.einsum("...a,...a->...", w2.eval(pts), a1.eval(pts))
    br = geo.bracket_fields(w1, w2).eval(pts)
    return t1 - t2 - br[..., rz]


def _hor_trace_of_nabla(F: FrameVectorField, pts) -> np.ndarray:
    M = geo.nabla_matrix(F, pts, F.n)
    idx = np.arange(2 * F.n)
    return M[..., idx, idx].sum(axis=-1)


# ---------------------------------------------------------------------------
# Lemma-style curvature/derivative facts, items 1..13


def verify_fact(fact_id: int, trials: int = 100, seed: int = 0,
                n: int = 1) -> IdentityResult:
    if fact_id not in FACT_IDS:
        raise ValueError(f"fact id must be in 1..13, got {fact_id}")
    rng = _rng(seed, 100 + fact_id + 1000 * n)
    pts = _points(rng, trials, n)
    d = dim_of(n)
    rz = r_index(n)
    hor = np.arange(2 * n)

    if fact_id == 1:
        # <nabla_{X1} Z, X2> = -<nabla_{X2} Z, X1> for horizontal X1, X2
        Z = _random_vertical_vf(n, rng, trials)
        M = geo.nabla_matrix(Z, pts, n)
        x1 = rng.uniform(-1, 1, size=(trials, 2 * n))
        x2 = rng.uniform(-1, 1, size=(trials, 2 * n))
        Mh = M[..., :2 * n, :2 * n]
        lhs = np.einsum("...a,...ab,...b->...", x1, Mh, x2)
        rhs = -np.einsum("...a,...ab,...b->...", x2, Mh, x1)
        return _result(f"fact-{fact_id}", np.abs(lhs - rhs), pts)

    if fact_id == 2:
        X1 = _random_horizontal_vf(n, rng, trials)
        w = X1.eval(pts)
        M = geo.nabla_matrix(X1, pts, n)
        res = np.abs(np.einsum("...a,...a->...", w,
                               M[..., rz]))
        return _result("fact-2", res, pts)

    if fact_id == 3:
        R = _reeb_vf(n)
        M = geo.nabla_matrix(R, pts, n)
        res = np.max(np.abs(M[..., rz, hor]), axis=-1)
        return _result("fact-3", res, pts)

    if fact_id == 4:
        X1 = _random_horizontal_vf(n, rng, trials)
        R = _reeb_vf(n)
        M = geo.nabla_matrix(R, pts, n)
        res = np.abs(np.einsum("...a,...a->...", X1.eval(pts), M[..., rz]))
        return _result("fact-4", res, pts)

    if fact_id == 5:
        f = _random_field(n, rng, trials)
        gh = geo.gradient_components(f, n).horizontal()
        gv_scalar = geo.frame_deriv_field(f, rz, n)
        ghv = gh.eval(pts)
        lhs = np.einsum("...a,...ab->...b", ghv, geo.nabla_matrix(gh, pts, n))
        # (1/2) grad_hor |grad_hor f|^2
        sq = None
        for a in hor:
            t = gh.components[a] * gh.components[a]
            sq = t if sq is None else sq + t
        half_grad = 0.5 * geo.gradient_components(sq, n).eval(pts)
        half_grad[..., rz] = 0.0
        gv = FrameVectorField(n, [const(d, 0.0)] * (2 * n) + [gv_scalar])
        corr = np.einsum("...a,...ab->...b", ghv, geo.nabla_matrix(gv, pts, n))
        corr[..., rz] = 0.0
        rhs = half_grad - 2.0 * corr
        res = np.max(np.abs(lhs - rhs), axis=-1)
        return _result("fact-5", res, pts)

    if fact_id in (6, 7):
        f = _random_field(n, rng, trials)
        frame = _gs_horizontal_frame(n, rng, trials)
        R = _reeb_vf(n)
        target = geo.gradient_components(f, n)
        if fact_id == 7:
            target = target.horizontal()
        Mt = geo.nabla_matrix(target, pts, n)
        acc = 0.0
        for vj in frame:
            br = geo.bracket_fields(R, vj).eval(pts)
            vv = vj.eval(pts)
            term = np.einsum("...a,...ab,...b->...", br, Mt, vv)
            if fact_id == 7:
                term = term + np.einsum("...a,...ab,...b->...", vv, Mt, br)
            acc = acc + term
        return _result(f"fact-{fact_id}", np.abs(acc), pts)

    if fact_id == 8:
        f = _random_field(n, rng, trials)
        gh = geo.gradient_components(f, n).horizontal()
        R = _reeb_vf(n)
        rf = geo.frame_deriv_field(f, rz, n)
        lhs = geo.gradient_components(rf, n).eval(pts)
        lhs[..., rz] = 0.0
        Mgh = geo.nabla_matrix(gh, pts, n)
        t1 = Mgh[..., rz, :]
        t2 = np.einsum("...a,...ab->...b", gh.eval(pts),
                       geo.nabla_matrix(R, pts, n))
        rhs = t1 - t2
        rhs[..., rz] = 0.0
        res = np.max(np.abs(lhs - rhs), axis=-1)
        return _result("fact-8", res, pts)

    if fact_id == 9:
        f = _random_field(n, rng, trials)
        rf = geo.frame_deriv_field(f, rz, n)
        lhs = geo.sub_laplacian_field(rf, n).value(pts)
        rhs = geo.frame_deriv_field(geo.sub_laplacian_field(f, n), rz, n).value(pts)
        return _result("fact-9", np.abs(lhs - rhs), pts)

    if fact_id == 10:
        f = _random_field(n, rng, trials)
        rf = geo.frame_deriv_field(f, rz, n)
        half_sq = 0.5 * rf * rf
        lhs = geo.sub_laplacian_field(half_sq, n).value(pts)
        lap = geo.sub_laplacian_field(f, n)
        t1 = rf.value(pts) * geo.frame_deriv_field(lap, rz, n).value(pts)
        gh = geo.gradient_components(f, n).horizontal()
        R = _reeb_vf(n)
        diff = geo.nabla_matrix(gh, pts, n)[..., rz, :] \
            - np.einsum("...a,...ab->...b", gh.eval(pts),
                        geo.nabla_matrix(R, pts, n))
        diff[..., rz] = 0.0
        t2 = np.einsum("...a,...a->...", diff, diff)
        return _result("fact-10", np.abs(lhs - (t1 + t2)), pts)

    if fact_id == 11:
        f = _random_field(n, rng, trials)
        rf_field = geo.frame_deriv_field(f, rz, n)
        gv = FrameVectorField(n, [const(d, 0.0)] * (2 * n) + [rf_field])
        rfv = rf_field.value(pts)
        ric_h, _, _ = geo._ric_matrices(n)
        lhs = rfv * rfv * ric_h[rz, rz]
        Mv = geo.nabla_matrix(gv, pts, n)
        block = Mv[..., :2 * n, :2 * n]
        rhs = np.einsum("...ab,...ab->...", block, block)
        return _result("fact-11", np.abs(lhs - rhs), pts)

    if fact_id == 12:
        f = _random_field(n, rng, trials)
        g = geo.gradient_components(f, n)
        ric_h, _, _ = geo._ric_matrices(n)
        gv = g.eval(pts)
        lhs = gv @ ric_h[:, rz]
        gamma = geo.build_connection_tables(n).gamma
        gh_fields = [geo.frame_deriv_field(f, a, n) for a in hor]
        Gcomps = []
        for b in range(d):
            acc = None
            for a in hor:
                if gamma[a, rz, b] != 0.0:
                    t = gh_fields[a] * float(gamma[a, rz, b])
                    acc = t if acc is None else acc + t
            Gcomps.append(acc if acc is not None else const(d, 0.0))
        G = FrameVectorField(n, Gcomps)
        rhs = _hor_trace_of_nabla(G, pts)
        return _result("fact-12", np.abs(lhs - rhs), pts)

    if fact_id == 13:
        X1 = _random_horizontal_vf(n, rng, trials)
        R = _reeb_vf(n)
        x = X1.eval(pts)
        Rt = geo.curvature_tensor(n)
        rvec = np.zeros(d)
        rvec[rz] = 1.0
        lhs = np.einsum("...a,b,c,...d,abcd->...", x, rvec, rvec, x, Rt)
        MR = geo.nabla_matrix(R, pts, n)
        nab = np.einsum("...a,...ab->...b", x, MR)
        rhs = np.einsum("...b,...b->...", nab, nab)
        return _result("fact-13", np.abs(lhs - rhs), pts)

    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Sasakian structure facts (covariant derivative of J, Reeb field, curvature)


def verify_sasakian_prop(item: int, trials: int = 100, seed: int = 0,
                         n: int = 1) -> IdentityResult:
    if item not in (1, 2, 3, 4):
        raise ValueError("item must be 1..4")
    rng = _rng(seed, 200 + item + 1000 * n)
    pts = _points(rng, trials, n)
    d = dim_of(n)
    rz = r_index(n)

    if item == 1:
        # (nabla_{w1} J) w2 = ((<w1,w2>) R - <R,w2> w1) / 2
        w1 = rng.uniform(-1, 1, size=(trials, d))
        w2 = _random_full_vf(n, rng, trials)
        Jw2 = w2.j_applied()
        MJ = geo.nabla_matrix(Jw2, pts, n)
        M2 = geo.nabla_matrix(w2, pts, n)
        Jm = geo.j_matrix(n)
        lhs = np.einsum("...a,...ab->...b", w1, MJ) \
            - np.einsum("...a,...ab,bc->...c", w1, M2, Jm)
        w2v = w2.eval(pts)
        rvec = np.zeros(d)
        rvec[rz] = 1.0
        rhs = 0.5 * (np.einsum("...a,...a->...", w1, w2v)[..., None] * rvec
                     - w2v[..., rz][..., None] * w1)
        return _result("prop25-1", np.max(np.abs(lhs - rhs), axis=-1), pts)

    if item == 2:
        w = rng.uniform(-1, 1, size=(trials, d))
        MR = geo.nabla_matrix(_reeb_vf(n), pts, n)
        lhs = np.einsum("...a,...ab->...b", w, MR)
        rhs = -0.5 * (w @ geo.j_matrix(n))
        return _result("prop25-2", np.max(np.abs(lhs - rhs), axis=-1), pts)

    if item == 3:
        w1 = rng.uniform(-1, 1, size=(trials, d))
        w2 = rng.uniform(-1, 1, size=(trials, d))
        MR = geo.nabla_matrix(_reeb_vf(n), pts, n)
        s = np.einsum("...a,...ab,...b->...", w1, MR, w2) \
            + np.einsum("...a,...ab,...b->...", w2, MR, w1)
        return _result("prop25-3", np.abs(s), pts)

    # item 4: Rm(w1,w2)R = (<R,w2> w1 - <R,w1> w2)/4
    w1 = rng.uniform(-1, 1, size=(trials, d))
    w2 = rng.uniform(-1, 1, size=(trials, d))
    Rt = geo.curvature_tensor(n)
    rvec = np.zeros(d)
    rvec[rz] = 1.0
    lhs = np.einsum("...a,...b,c,abcd->...d", w1, w2, rvec, Rt)
    rhs = 0.25 * (w2[..., rz][..., None] * w1 - w1[..., rz][..., None] * w2)
    return _result("prop25-4", np.max(np.abs(lhs - rhs), axis=-1), pts)


# ---------------------------------------------------------------------------
# contact axioms, normality, compatibility of metric, J and dalpha


def verify_contact_axioms(trials: int = 100, seed: int = 0,
                          n: int = 1) -> list[IdentityResult]:
    rng = _rng(seed, 300 + 1000 * n)
    pts = _points(rng, trials, n)
    d = dim_of(n)
    rz = r_index(n)
    Jm = geo.j_matrix(n)
    out = []

    # J^2 = -id on D, alpha(R) = 1, J R = 0
    v = rng.uniform(-1, 1, size=(trials, 2 * n))
    vfull = np.concatenate([v, np.zeros((trials, 1))], axis=-1)
    j2 = vfull @ Jm @ Jm
    res = np.max(np.abs(j2 + vfull), axis=-1)
    rvec = np.zeros(d)
    rvec[rz] = 1.0
    res = np.maximum(res, np.max(np.abs(rvec @ Jm)))
    res = np.maximum(res, abs(rvec[rz] - 1.0))
    out.append(_result("contact-almost", res, pts))

    # <J v1, J v2> = <v1, v2> on D and <R,R> = 1
    v1 = np.concatenate([rng.uniform(-1, 1, size=(trials, 2 * n)),
                         np.zeros((trials, 1))], axis=-1)
    v2 = np.concatenate([rng.uniform(-1, 1, size=(trials, 2 * n)),
                         np.zeros((trials, 1))], axis=-1)
    lhs = np.einsum("...a,...a->...", v1 @ Jm, v2 @ Jm)
    rhs = np.einsum("...a,...a->...", v1, v2)
    out.append(_result("contact-metric", np.abs(lhs - rhs), pts))

    # <w1, J w2> = dalpha(w1, w2) for random vector fields
    w1 = _random_full_vf(n, rng, trials)
    w2 = _random_full_vf(n, rng, trials)
    pair = np.einsum("...a,...a->...", w1.eval(pts), w2.eval(pts) @ Jm)
    da = _dalpha_values(w1, w2, pts)
    out.append(_result("contact-dalpha", np.abs(pair - da), pts))

    # nondegeneracy of dalpha on D: with the group frame the matrix is the
    # symplectic pairing, determinant one
    frame_vals = np.zeros((trials, 2 * n, 2 * n))
    basis = [FrameVectorField.from_constant(n, np.eye(d)[a])
             for a in range(2 * n)]
    for a in range(2 * n):
        for b in range(2 * n):
            if a < b:
                frame_vals[:, a, b] = _dalpha_values(basis[a], basis[b], pts)
                frame_vals[:, b, a] = -frame_vals[:, a, b]
    det = np.linalg.det(frame_vals)
    out.append(_result("contact-nondegenerate", np.abs(det - 1.0), pts))

    # normality: [J,J](w1,w2) + dalpha(w1,w2) R = 0 with
    # [J,J](w1,w2) = J^2 [w1,w2] + [Jw1,Jw2] - J[Jw1,w2] - J[w1,Jw2]
    Jw1, Jw2 = w1.j_applied(), w2.j_applied()
    b0 = geo.bracket_fields(w1, w2).eval(pts)
    b1 = geo.bracket_fields(Jw1, Jw2).eval(pts)
    b2 = geo.bracket_fields(Jw1, w2).eval(pts)
    b3 = geo.bracket_fields(w1, Jw2).eval(pts)
    nij = b0 @ Jm @ Jm + b1 - b2 @ Jm - b3 @ Jm
    total = nij + da[..., None] * rvec
    out.append(_result("contact-normality", np.max(np.abs(total), axis=-1), pts))
    return out


def verify_horizontal_isometry(trials: int = 100, seed: int = 0,
                               n: int = 1) -> list[IdentityResult]:
    """The two defining conditions for R: [R, X] horizontal, and
    <nabla_{X1} R, X2> + <X1, nabla_{X2} R> = 0 on horizontal fields."""
    rng = _rng(seed, 400 + 1000 * n)
    pts = _points(rng, trials, n)
    rz = r_index(n)
    R = _reeb_vf(n)
    X1 = _random_horizontal_vf(n, rng, trials)
    X2 = _random_horizontal_vf(n, rng, trials)
    br = geo.bracket_fields(R, X1).eval(pts)
    res_bracket = np.abs(br[..., rz])
    MR = geo.nabla_matrix(R, pts, n)
    s = np.einsum("...a,...ab,...b->...", X1.eval(pts), MR, X2.eval(pts)) \
        + np.einsum("...a,...ab,...b->...", X2.eval(pts), MR, X1.eval(pts))
    return [_result("hiso-bracket", res_bracket, pts),
            _result("hiso-killing", np.abs(s), pts)]


def verify_prop26(item: int, trials: int = 100, seed: int = 0,
                  n: int = 1) -> IdentityResult:
    """Ricci trace identities of the Sasakian example."""
    if item not in (1, 2):
        raise ValueError("item must be 1 or 2")
    rng = _rng(seed, 500 + item + 1000 * n)
    pts = _points(rng, trials, n)
    d = dim_of(n)
    rz = r_index(n)
    w = rng.uniform(-1, 1, size=(trials, d))
    w_hor = w.copy()
    w_hor[..., rz] = 0.0
    ric_h, ric_v, ric_t = geo._ric_matrices(n)
    if item == 1:
        full = np.einsum("...a,ab,...b->...", w, ric_v, w)
        horiz = np.einsum("...a,ab,...b->...", w_hor, ric_v, w_hor)
        target = 0.25 * np.einsum("...a,...a->...", w_hor, w_hor)
        res = np.maximum(np.abs(full - horiz), np.abs(full - target))
        return _result("prop26-1", res, pts)
    lhs = np.einsum("...a,ab,...b->...", w, ric_h, w) \
        + 3.0 * np.einsum("...a,ab,...b->...", w_hor, ric_v, w_hor)
    rhs = 0.5 * n * w[..., rz] ** 2 \
        + np.einsum("...a,ab,...b->...", w_hor, ric_t, w_hor)
    return _result("prop26-2", np.abs(lhs - rhs), pts)


# ---------------------------------------------------------------------------


def run_all(trials: int = 100, seed: int = 0, ns=(1, 2)) -> list[IdentityResult]:
    """Every identity for each n, as CSV-ready rows (id prefixed with n)."""
    out = []
    for n in ns:
        rows: list[IdentityResult] = []
        for fid in FACT_IDS:
            rows.append(verify_fact(fid, trials, seed, n))
        r13 = rows[-1]
        rows.append(IdentityResult("fact-13h", r13.samples, r13.max_residual,
                                   r13.worst_point))
        for item in (1, 2, 3, 4):
            rows.append(verify_sasakian_prop(item, trials, seed, n))
        rows.extend(verify_contact_axioms(trials, seed, n))
        rows.extend(verify_horizontal_isometry(trials, seed, n))
        for item in (1, 2):
            rows.append(verify_prop26(item, trials, seed, n))
        for r in rows:
            out.append(IdentityResult(f"n{n}:{r.identity_id}", r.samples,
                                      r.max_residual, r.worst_point))
    return out
