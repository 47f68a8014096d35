import json
import math
import random

import pytest
import sympy as sp

from lcframe import catalog
from lcframe.errors import LcframeError
from lcframe.minkowski import LVec3, pseudo_dot, wedge
from lcframe.surface import (
    DomainBox, SurfaceDef, SurfaceFormatError, basic_invariants_at, frame_at,
    validate_framed,
)


def vec_close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


class TestSphereClosedForms:
    def test_frame_leg_m(self, sphere):
        for v in (0.0, 0.7, 2.3, 4.4, 6.1):
            fr = frame_at(sphere, 0.3, v)
            assert vec_close(fr.m, (0.0, -math.cos(v), math.sin(v)))

    def test_frame_orthogonality(self, sphere):
        fr = frame_at(sphere, -0.8, 2.0)
        assert abs(pseudo_dot(fr.m, fr.v)) < 1e-12
        assert abs(pseudo_dot(fr.m, fr.w)) < 1e-12
        assert abs(pseudo_dot(fr.m, fr.m) - 1.0) < 1e-12

    def test_coefficient_matrix(self, sphere):
        for u in (-1.1, -0.4, 0.0, 0.5, 1.2):
            for v in (0.3, 2.1, 5.0):
                inv = basic_invariants_at(sphere, u, v)
                assert abs(inv.a1 + (math.sin(u) - math.cos(u)) / 2) < 1e-12
                assert abs(inv.b1 - (math.sin(u) + math.cos(u)) / 2) < 1e-12
                assert abs(inv.c1) < 1e-12
                assert abs(inv.a2) < 1e-12 and abs(inv.b2) < 1e-12
                assert abs(inv.c2 + math.cos(u)) < 1e-12
                assert inv.e1 == inv.f1 == inv.g1 == 0.0
                assert abs(inv.e2) < 1e-12
                assert abs(inv.f2 - 0.5) < 1e-12
                assert abs(inv.g2 + 0.5) < 1e-12

    def test_tangent_reconstruction(self, sphere):
        # X_u must equal a1 v + b1 w + c1 m, and X_v must equal c2 m
        rng = random.Random(7)
        for _ in range(200):
            u = rng.uniform(-math.pi / 2, math.pi / 2)
            v = rng.uniform(0, 2 * math.pi)
            inv = basic_invariants_at(sphere, u, v)
            fr = frame_at(sphere, u, v)
            rec_u = (fr.v.scaled(inv.a1) + fr.w.scaled(inv.b1) + fr.m.scaled(inv.c1))
            rec_v = (fr.v.scaled(inv.a2) + fr.w.scaled(inv.b2) + fr.m.scaled(inv.c2))
            assert (sphere.x_u(u, v) - rec_u).max_abs() <= 1e-9
            assert (sphere.x_v(u, v) - rec_v).max_abs() <= 1e-9


class TestFrameDerivativeStructure:
    """The frame derivatives expand in the frame itself with the e/f/g
    coefficients; checked by central finite differences."""

    STEP = 1e-5

    def _fd(self, surface, which, u, v, var):
        h = self.STEP
        if var == "u":
            hi, lo = which(u + h, v), which(u - h, v)
        else:
            hi, lo = which(u, v + h), which(u, v - h)
        return (hi - lo).scaled(1.0 / (2 * h))

    @pytest.mark.parametrize("fixture", ["sphere", "twisted_band"])
    def test_frame_ode_consistency(self, fixture, request):
        s = request.getfixturevalue(fixture)
        rng = random.Random(99)
        for _ in range(300):
            u = rng.uniform(s.domain.u_min + 1e-3, s.domain.u_max - 1e-3)
            v = rng.uniform(s.domain.v_min + 1e-3, s.domain.v_max - 1e-3)
            inv = basic_invariants_at(s, u, v)
            fr = frame_at(s, u, v)
            cases = [
                (s.frame_vec_v, "u", fr.v.scaled(inv.e1) + fr.m.scaled(2 * inv.g1)),
                (s.frame_vec_w, "u", fr.w.scaled(-inv.e1) + fr.m.scaled(2 * inv.f1)),
                (s.frame_vec_m, "u", fr.v.scaled(inv.f1) + fr.w.scaled(inv.g1)),
                (s.frame_vec_v, "v", fr.v.scaled(inv.e2) + fr.m.scaled(2 * inv.g2)),
                (s.frame_vec_w, "v", fr.w.scaled(-inv.e2) + fr.m.scaled(2 * inv.f2)),
                (s.frame_vec_m, "v", fr.v.scaled(inv.f2) + fr.w.scaled(inv.g2)),
            ]
            for which, var, expected in cases:
                fd = self._fd(s, which, u, v, var)
                assert (fd - expected).max_abs() <= 1e-6

    @pytest.mark.parametrize("fixture", ["sphere", "twisted_band"])
    def test_structural_zeros(self, fixture, request):
        # lightlike self-pairing forces zero coefficients in the frame
        # derivative expansions
        s = request.getfixturevalue(fixture)
        rng = random.Random(5)
        for _ in range(100):
            u = rng.uniform(s.domain.u_min + 1e-3, s.domain.u_max - 1e-3)
            v = rng.uniform(s.domain.v_min + 1e-3, s.domain.v_max - 1e-3)
            fr = frame_at(s, u, v)
            vu = self._fd(s, s.frame_vec_v, u, v, "u")
            wu = self._fd(s, s.frame_vec_w, u, v, "u")
            assert abs(pseudo_dot(vu, fr.v)) <= 1e-6
            assert abs(pseudo_dot(wu, fr.w)) <= 1e-6
            # <v,w> = -2 is constant, so the mixed pairings cancel
            assert abs(pseudo_dot(vu, fr.w) + pseudo_dot(fr.v, wu)) <= 1e-6


class TestSympyOracle:
    """Re-derive all invariant fields with an independent engine.

    The oracle builds the cross product from the determinant pairing
    property alone and every coefficient from its defining inner
    product, then differentiates with sympy."""

    @staticmethod
    def _oracle(x_srcs, v_srcs, w_srcs):
        u, v = sp.symbols("u v", real=True)
        loc = {"u": u, "v": v}

        def s2s(src):
            return sp.sympify(src.replace("^", "**"), locals=loc)

        X = sp.Matrix([s2s(c) for c in x_srcs])
        fv = sp.Matrix([s2s(c) for c in v_srcs])
        fw = sp.Matrix([s2s(c) for c in w_srcs])

        def pdot(a, b):
            return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]

        def wedge_sym(a, b):
            e = sp.eye(3)
            return sp.Matrix([
                -sp.Matrix([e[:, 0].T, a.T, b.T]).det(),
                sp.Matrix([e[:, 1].T, a.T, b.T]).det(),
                sp.Matrix([e[:, 2].T, a.T, b.T]).det(),
            ])

        m = -wedge_sym(fv, fw) / 2
        Xu, Xv = X.diff(u), X.diff(v)
        fields = {
            "a1": -pdot(Xu, fw) / 2, "b1": -pdot(Xu, fv) / 2, "c1": pdot(Xu, m),
            "a2": -pdot(Xv, fw) / 2, "b2": -pdot(Xv, fv) / 2, "c2": pdot(Xv, m),
            "e1": pdot(fv, fw.diff(u)) / 2, "f1": pdot(fw.diff(u), m) / 2,
            "g1": pdot(fv.diff(u), m) / 2,
            "e2": pdot(fv, fw.diff(v)) / 2, "f2": pdot(fw.diff(v), m) / 2,
            "g2": pdot(fv.diff(v), m) / 2,
        }
        for name in ("a1", "b1", "c1", "c2"):
            fields[name + "u"] = fields[name].diff(u)
            fields[name + "v"] = fields[name].diff(v)
        fields["lambda_til"] = -4 * fields["a1"] * fields["b1"]
        return {k: sp.lambdify((u, v), sp.simplify(e), "math")
                for k, e in fields.items()}

    @pytest.mark.parametrize("name", ["sphere", "twisted_band", "flared_trough"])
    def test_invariants_match_oracle(self, name):
        data = json.loads(catalog.surface_text(name))
        oracle = self._oracle(data["X"], data["v"], data["w"])
        s = catalog.load(name)
        rng = random.Random(hash(name) % 100000)
        for _ in range(60):
            u = rng.uniform(s.domain.u_min, s.domain.u_max)
            v = rng.uniform(s.domain.v_min, s.domain.v_max)
            inv = basic_invariants_at(s, u, v)
            for field_name in ("a1", "b1", "c1", "a2", "b2", "c2",
                               "e1", "f1", "g1", "e2", "f2", "g2",
                               "a1u", "a1v", "b1u", "b1v",
                               "c1u", "c1v", "c2u", "c2v"):
                got = getattr(inv, field_name)
                want = oracle[field_name](u, v)
                assert abs(got - want) <= 1e-9 * (1 + abs(want)), (
                    name, field_name, u, v, got, want)
            lam = s.scalar("lambda_til", u, v)
            want = oracle["lambda_til"](u, v)
            assert abs(lam - want) <= 1e-9 * (1 + abs(want))


class TestTwistedBandClosedForms:
    """Frozen hand-derived coefficient fields for the u-framed band."""

    def test_fields(self, twisted_band):
        rng = random.Random(3)
        for _ in range(50):
            u = rng.uniform(-math.pi, math.pi)
            v = rng.uniform(-2.5, 2.5)
            inv = basic_invariants_at(twisted_band, u, v)
            sc = math.sin(u) * math.cos(u)
            assert abs(inv.a1 - (1 + v + sc) / 2) < 1e-12
            assert abs(inv.b1 - (1 - v - sc) / 2) < 1e-12
            assert abs(inv.c1 + math.cos(u) ** 2) < 1e-12
            assert abs(inv.c2 - 1.0) < 1e-12
            assert abs(inv.e1) < 1e-12
            assert abs(inv.f1 - 0.5) < 1e-12
            assert abs(inv.g1 + 0.5) < 1e-12
            assert inv.e2 == inv.f2 == inv.g2 == 0.0


class TestValidation:
    def test_sphere_admitted(self, sphere):
        rep = validate_framed(sphere, (64, 64), 1e-8)
        assert rep.admitted
        assert rep.max_wedge_residual < 1e-9
        assert rep.max_delta4_residual < 1e-9
        assert rep.max_abs_a2 < 1e-12 and rep.max_abs_b2 < 1e-12

    def test_equal_frame_fields_rejected(self):
        s = SurfaceDef(
            "degenerate",
            ["u", "0", "v"],
            ["1", "sin(v)", "cos(v)"],
            ["1", "sin(v)", "cos(v)"],  # w = v: pairing is 0, not -2
            DomainBox(0, 1, 0, 1))
        rep = validate_framed(s, (4, 4), 1e-8)
        assert not rep.admitted
        assert rep.witness[2] == "lightlike-pair"

    def test_swapped_roles_rejected_with_witness(self):
        # exchanging the parameter roles in the position only makes the
        # u-tangent (not the v-tangent) proportional to m, so a2/b2 fail
        s = SurfaceDef(
            "swapped",
            ["sin(v)", "cos(v)*sin(u)", "cos(v)*cos(u)"],
            ["1", "sin(u)", "cos(u)"],
            ["1", "-sin(u)", "-cos(u)"],
            DomainBox(0.2, 1.2, -1.2, -0.2))
        rep = validate_framed(s, (8, 8), 1e-8)
        assert not rep.admitted
        assert rep.witness[2] in ("a2", "b2")
        assert rep.max_abs_a2 > 1e-3 or rep.max_abs_b2 > 1e-3

    def test_all_catalog_surfaces_admitted(self):
        for name in catalog.names():
            rep = validate_framed(catalog.load(name), (12, 12), 1e-8)
            assert rep.admitted, (name, rep.witness)


class TestSurfaceFiles:
    def test_file_round_trip(self, tmp_path, sphere):
        text = catalog.surface_text("sphere")
        path = tmp_path / "copy.surf"
        path.write_text(text, encoding="utf-8")
        loaded = SurfaceDef.from_file(path)
        assert loaded.name == "sphere"
        assert loaded.domain == sphere.domain
        inv_a = basic_invariants_at(loaded, 0.3, 1.0)
        inv_b = basic_invariants_at(sphere, 0.3, 1.0)
        assert inv_a == inv_b

    def test_missing_key(self):
        with pytest.raises(SurfaceFormatError):
            SurfaceDef.from_dict({"name": "x", "X": ["u", "v", "1"]})

    def test_wrong_component_count(self):
        with pytest.raises(SurfaceFormatError):
            SurfaceDef.from_dict({
                "name": "x", "X": ["u", "v"], "v": ["1", "0", "1"],
                "w": ["1", "0", "-1"],
                "domain": {"u": [0, 1], "v": [0, 1]}})

    def test_bad_domain(self):
        with pytest.raises(SurfaceFormatError):
            SurfaceDef.from_dict({
                "name": "x", "X": ["u", "v", "1"], "v": ["1", "0", "1"],
                "w": ["1", "0", "-1"], "domain": {"u": [1, 0], "v": [0, 1]}})

    def test_domain_bounds_must_be_constant(self):
        with pytest.raises(LcframeError):
            SurfaceDef.from_dict({
                "name": "x", "X": ["u", "v", "1"], "v": ["1", "0", "1"],
                "w": ["1", "0", "-1"], "domain": {"u": ["2*u", 1], "v": [0, 1]}})

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.surf"
        path.write_text("not json", encoding="utf-8")
        with pytest.raises(SurfaceFormatError):
            SurfaceDef.from_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SurfaceFormatError):
            SurfaceDef.from_file(tmp_path / "absent.surf")

    def test_expression_error_carries_position(self):
        with pytest.raises(LcframeError) as err:
            SurfaceDef.from_dict({
                "name": "x", "X": ["sin(q)", "v", "1"], "v": ["1", "0", "1"],
                "w": ["1", "0", "-1"], "domain": {"u": [0, 1], "v": [0, 1]}})
        assert "q" in str(err.value)


class TestConstantFrameExample:
    def test_plane_strip_with_constant_frame(self):
        # frame (1,0,1), (1,0,-1): m = -(1/2) wedge = (0,-1,0), a unit
        # spacelike vector; X_v parallel to m keeps a2 = b2 = 0
        s = SurfaceDef(
            "plane-strip",
            ["u", "-v", "0"],
            ["1", "0", "1"],
            ["1", "0", "-1"],
            DomainBox(-1, 1, -1, 1))
        fr = frame_at(s, 0.0, 0.0)
        assert vec_close(fr.m, (0.0, -1.0, 0.0))
        assert abs(pseudo_dot(fr.m, fr.m) - 1.0) < 1e-15
        rep = validate_framed(s, (4, 4), 1e-10)
        assert rep.admitted

    def test_domain_enforcement(self, sphere):
        with pytest.raises(LcframeError):
            frame_at(sphere, 10.0, 0.0)

    def test_grid_requires_2x2(self, sphere):
        with pytest.raises(LcframeError):
            sphere.domain.grid(1, 5)
