"""Frames, connection tables, curvature and differential operators on H^n.

Frozen expected values were derived by hand from the Koszul formula over the
structure constants ([X_i, Y_i] = -R, all other brackets zero); the bracket
itself is cross-checked against an independent coordinate-Jacobian oracle.
"""

import numpy as np
import pytest

from subharnack import geometry as geo
from subharnack.fields import Field, coordinate, const
from subharnack import jets


def hp(*coords):
    return geo.HPoint(np.array(coords, dtype=float))


def tangent(p, comps):
    return geo.HTangent.from_components(p, np.asarray(comps, dtype=float))


ORIGIN = hp(0.0, 0.0, 0.0)


class TestFrame:
    def test_frame_at_origin(self):
        X, Y, R = geo.frame_at(ORIGIN, 1)
        assert np.allclose(X, [1, 0, 0])
        assert np.allclose(Y, [0, 1, 0])
        assert np.allclose(R, [0, 0, 1])

    def test_frame_off_origin(self):
        X, Y, R = geo.frame_at(hp(0.0, 2.0, 0.0), 1)
        assert np.allclose(X, [1, 0, 1])  # dx + (y/2) dz with y=2
        assert np.allclose(Y, [0, 1, 0])
        assert np.allclose(R, [0, 0, 1])

    def test_orthonormality_and_alpha_duality_many_points(self):
        # frame inverse is closed form; check E(p) and its inverse agree at
        # a large random sample, which is exactly frame orthonormality for
        # the metric defined by declaring the frame orthonormal.
        rng = np.random.default_rng(3)
        for n in (1, 2):
            d = 2 * n + 1
            pts = rng.uniform(-5, 5, size=(10**6 // 4, d))
            E = geo.frame_matrix(pts, n)
            w = rng.normal(size=(pts.shape[0], d))
            back = geo.coords_to_frame(geo.frame_to_coords(w, pts, n), pts, n)
            assert np.max(np.abs(back - w)) < 1e-14 * max(1, np.max(np.abs(w)))
            # alpha-duality: the R row of E is the dz direction
            assert np.max(np.abs(E[:, d - 1, :d - 1])) == 0.0

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            geo.frame_at(ORIGIN, 0)


class TestBracket:
    def test_structure_constants_n1(self):
        assert np.allclose(geo.bracket(0, 1, 1), [0, 0, -1])  # [X, Y] = -R
        assert np.allclose(geo.bracket(1, 0, 1), [0, 0, 1])
        assert np.allclose(geo.bracket(0, 0, 1), 0.0)
        assert np.allclose(geo.bracket(0, 2, 1), 0.0)

    def test_bracket_vs_coordinate_jacobian_oracle(self):
        # independent oracle: [e_a,e_b]^mu = E_a^nu d_nu E_b^mu - (a<->b),
        # evaluated with jets on the affine frame coefficients.
        for n in (1, 2):
            d = 2 * n + 1
            rng = np.random.default_rng(5 + n)
            pts = rng.uniform(-2, 2, size=(4, d))
            comps_fields = [[None] * d for _ in range(d)]
            for a in range(d):
                for mu in range(d):
                    def fn(xs, a=a, mu=mu):
                        E_row = _frame_entry(xs, a, mu, n)
                        return E_row
                    comps_fields[a][mu] = Field(d, fn)
            for a in range(d):
                for b in range(d):
                    br = np.zeros((pts.shape[0], d))
                    for mu in range(d):
                        acc = np.zeros(pts.shape[0])
                        for nu in range(d):
                            Ea = comps_fields[a][nu].jet(pts, order=0).val
                            Eb = comps_fields[b][nu].jet(pts, order=0).val
                            dEb = comps_fields[b][mu].partial(nu).jet(pts, order=0).val
                            dEa = comps_fields[a][mu].partial(nu).jet(pts, order=0).val
                            acc = acc + Ea * dEb - Eb * dEa
                        br[:, mu] = acc
                    frame_comps = geo.coords_to_frame(br, pts, n)
                    expected = geo.bracket(a, b, n)
                    assert np.max(np.abs(frame_comps - expected)) < 1e-13

    def test_index_errors(self):
        with pytest.raises(IndexError):
            geo.bracket(0, 5, 1)


def _frame_entry(xs, a, mu, n):
    """Frame coefficient E[a, mu] as a jet expression."""
    d = 2 * n + 1
    m = xs[0].m
    from subharnack.jets import Jet
    if a < n:  # X_i
        if mu == a:
            return Jet.const(1.0, m, xs[0].order)
        if mu == d - 1:
            return 0.5 * xs[n + a]
    elif a < 2 * n:  # Y_i
        i = a - n
        if mu == a:
            return Jet.const(1.0, m, xs[0].order)
        if mu == d - 1:
            return -0.5 * xs[i]
    else:
        if mu == d - 1:
            return Jet.const(1.0, m, xs[0].order)
    return Jet.const(0.0, m, xs[0].order)


class TestConnection:
    def test_levi_civita_hand_values_n1(self):
        t = geo.build_connection_tables(1)
        g = t.gamma
        # hand Koszul: nabla_X Y = -R/2, nabla_X R = Y/2, nabla_Y R = -X/2,
        # nabla_R X = Y/2, nabla_R Y = -X/2, nabla_X X = nabla_R R = 0
        assert g[0, 1, 2] == pytest.approx(-0.5)
        assert g[0, 2, 1] == pytest.approx(0.5)
        assert g[1, 2, 0] == pytest.approx(-0.5)
        assert g[2, 0, 1] == pytest.approx(0.5)
        assert g[2, 1, 0] == pytest.approx(-0.5)
        assert np.allclose(g[0, 0], 0)
        assert np.allclose(g[2, 2], 0)

    @pytest.mark.parametrize("n", [1, 2])
    def test_metric_compatibility_exact(self, n):
        g = geo.build_connection_tables(n).gamma
        assert np.array_equal(g, -np.swapaxes(g, 1, 2))

    @pytest.mark.parametrize("n", [1, 2])
    def test_torsion_free_exact(self, n):
        g = geo.build_connection_tables(n).gamma
        C = geo.structure_constants(n)
        assert np.array_equal(g - np.swapaxes(g, 0, 1), C)

    @pytest.mark.parametrize("n", [1, 2])
    def test_tanaka_table_vanishes_on_heisenberg(self, n):
        t = geo.build_connection_tables(n)
        assert np.max(np.abs(t.tanaka_gamma)) == 0.0

    def test_tanaka_formula_example(self):
        # nabla-bar_X Y = nabla_X Y - <JX,Y> R / 2 = -R/2 + R/2 = 0
        t = geo.build_connection_tables(1)
        assert np.allclose(t.tanaka_gamma[0, 1], 0.0)


class TestJAndContact:
    def test_j_on_frame(self):
        p = ORIGIN
        X = tangent(p, [1, 0, 0])
        R = tangent(p, [0, 0, 1])
        assert np.allclose(geo.j_apply(X).frame_components, [0, -1, 0])
        assert np.allclose(geo.j_apply(R).frame_components, 0.0)
        JJX = geo.j_apply(geo.j_apply(X))
        assert np.allclose(JJX.frame_components, [-1, 0, 0])

    def test_contact_form(self):
        p = ORIGIN
        assert geo.contact_form(tangent(p, [0, 0, 1])) == 1.0
        assert geo.contact_form(tangent(p, [1, 0, 0])) == 0.0
        assert geo.contact_form(tangent(p, [0.3, -2, 0.5])) == 0.5


class TestCurvature:
    def test_sectional_values_n1(self):
        p = hp(0.3, -0.2, 1.1)
        X = tangent(p, [1, 0, 0])
        Y = tangent(p, [0, 1, 0])
        R = tangent(p, [0, 0, 1])
        rm_yx_x = geo.riemann(Y, X, X)
        assert np.dot(rm_yx_x.frame_components, Y.frame_components) == pytest.approx(-0.75)
        rm_rx_x = geo.riemann(R, X, X)
        assert np.dot(rm_rx_x.frame_components, R.frame_components) == pytest.approx(0.25)

    def test_antisymmetry(self):
        p = ORIGIN
        w = tangent(p, [0.5, -1.2, 0.7])
        out = geo.riemann(w, w, w)
        assert np.allclose(out.frame_components, 0.0, atol=1e-15)

    def test_ricci_values_n1(self):
        p = ORIGIN
        X = tangent(p, [1, 0, 0])
        R = tangent(p, [0, 0, 1])
        assert geo.ric_ver(X) == pytest.approx(0.25, abs=1e-12)
        assert geo.ric_hor(R) == pytest.approx(0.5, abs=1e-12)
        assert geo.ric_hor(X) == pytest.approx(-0.75, abs=1e-12)
        assert geo.tanaka_ric(X) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2])
    def test_ric_hor_of_reeb_is_n_over_2(self, n):
        p = geo.HPoint(np.zeros(2 * n + 1))
        R = geo.HTangent.from_components(p, np.eye(2 * n + 1)[2 * n])
        assert geo.ric_hor(R) == pytest.approx(n / 2, abs=1e-12)

    def test_extension_independence(self):
        # curvature is tensorial: contract with random vectors two ways
        rng = np.random.default_rng(7)
        n = 2
        d = 2 * n + 1
        Rt = geo.curvature_tensor(n)
        p = geo.HPoint(rng.normal(size=d))
        for _ in range(5):
            a, b, c = rng.normal(size=(3, d))
            w = geo.riemann(geo.HTangent.from_components(p, a),
                            geo.HTangent.from_components(p, b),
                            geo.HTangent.from_components(p, c))
            direct = np.einsum("a,b,c,abcd->d", a, b, c, Rt)
            assert np.allclose(w.frame_components, direct, atol=1e-14)


class TestOperators:
    def test_sub_laplacian_of_x2_plus_y2(self):
        d = 3
        f = coordinate(d, 0) ** 2 + coordinate(d, 1) ** 2
        for p in [hp(0, 0, 0), hp(1.2, -0.4, 3.0)]:
            assert geo.sub_laplacian(f, p, 1) == pytest.approx(4.0, abs=1e-13)

    def test_z_field(self):
        f = coordinate(3, 2)
        p = hp(0.7, -1.3, 0.2)
        assert geo.sub_laplacian(f, p, 1) == pytest.approx(0.0, abs=1e-14)
        g = geo.grad_ver(f, p, 1)
        assert np.dot(g, g) == pytest.approx(1.0, abs=1e-14)
        gh = geo.grad_hor(f, p, 1)
        # X z = y/2, Y z = -x/2
        assert gh[0] == pytest.approx(-1.3 / 2)
        assert gh[1] == pytest.approx(-0.7 / 2)

    def test_constant_field(self):
        f = const(3, 2.5)
        p = hp(0.1, 0.2, 0.3)
        assert np.allclose(geo.grad(f, p, 1), 0.0)
        assert geo.sub_laplacian(f, p, 1) == 0.0
        assert np.allclose(geo.hessian(f, p, 1), 0.0)

    def test_two_sub_laplacian_paths_agree(self):
        rng = np.random.default_rng(12)
        from subharnack.fields import random_polytrig_field
        for n in (1, 2):
            d = 2 * n + 1
            f = random_polytrig_field(d, rng)
            pts = rng.uniform(-1, 1, size=(40, d))
            a = geo.sub_laplacian(f, pts, n)
            b = geo.sub_laplacian_via_fields(f, pts, n)
            assert np.max(np.abs(a - b)) < 1e-11

    def test_covariant_derivative_on_frame_fields(self):
        p = hp(0.4, 0.9, -0.1)
        d = 3
        R_field = geo.FrameVectorField.from_constant(1, np.array([0.0, 0, 1]))
        X_field = geo.FrameVectorField.from_constant(1, np.array([1.0, 0, 0]))
        X = tangent(p, [1, 0, 0])
        R = tangent(p, [0, 0, 1])
        assert np.allclose(geo.covariant_derivative(X, R_field).frame_components,
                           [0, 0.5, 0], atol=1e-14)
        assert np.allclose(geo.covariant_derivative(R, X_field).frame_components,
                           [0, 0.5, 0], atol=1e-14)
        zero = geo.FrameVectorField.from_constant(1, np.zeros(3))
        assert np.allclose(geo.covariant_derivative(X, zero).frame_components, 0.0)

    def test_hessian_symmetric_for_levi_civita(self):
        rng = np.random.default_rng(2)
        from subharnack.fields import random_polytrig_field
        f = random_polytrig_field(3, rng)
        pts = rng.uniform(-1, 1, size=(10, 3))
        H = geo.hessian(f, pts, 1)
        assert np.max(np.abs(H - np.swapaxes(H, -1, -2))) < 1e-12


class TestBracketFields:
    def test_bracket_of_group_frame_fields(self):
        n = 1
        X = geo.FrameVectorField.from_constant(n, np.array([1.0, 0, 0]))
        Y = geo.FrameVectorField.from_constant(n, np.array([0.0, 1, 0]))
        br = geo.bracket_fields(X, Y)
        pts = np.array([[0.3, 0.8, -0.2], [0, 0, 0]])
        assert np.allclose(br.eval(pts), [[0, 0, -1], [0, 0, -1]], atol=1e-14)

    def test_bracket_antisymmetry_random(self):
        rng = np.random.default_rng(8)
        from subharnack.fields import random_polytrig_field
        n = 1
        F = geo.FrameVectorField(n, [random_polytrig_field(3, rng) for _ in range(3)])
        G = geo.FrameVectorField(n, [random_polytrig_field(3, rng) for _ in range(3)])
        fg = geo.bracket_fields(F, G)
        gf = geo.bracket_fields(G, F)
        pts = rng.uniform(-1, 1, size=(15, 3))
        assert np.max(np.abs(fg.eval(pts) + gf.eval(pts))) < 1e-12

    def test_bracket_via_covariant_difference(self):
        # torsion-free: [F,G] = nabla_F G - nabla_G F, pointwise
        rng = np.random.default_rng(9)
        from subharnack.fields import random_polytrig_field
        n = 1
        F = geo.FrameVectorField(n, [random_polytrig_field(3, rng) for _ in range(3)])
        G = geo.FrameVectorField(n, [random_polytrig_field(3, rng) for _ in range(3)])
        pts = rng.uniform(-1, 1, size=(8, 3))
        br = geo.bracket_fields(F, G).eval(pts)
        Fv, Gv = F.eval(pts), G.eval(pts)
        MG = geo.nabla_matrix(G, pts, n)
        MF = geo.nabla_matrix(F, pts, n)
        alt = np.einsum("...a,...ab->...b", Fv, MG) - np.einsum("...a,...ab->...b", Gv, MF)
        assert np.max(np.abs(br - alt)) < 1e-11
