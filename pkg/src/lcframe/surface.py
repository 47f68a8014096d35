"""Lightcone framed surfaces.

A surface definition is a triple of vector fields (X, v, w) over a
rectangle in the (u, v) parameter plane: the position X and a pair of
lightlike frame fields v, w with <v,w> = -2.  The third frame leg is
the unit spacelike field m = -(1/2) v^w.

From the components we build, symbolically, the twelve scalar
coefficients of the moving-frame equations

    X_u = a1 v + b1 w + c1 m        v_u = e1 v + 2 g1 m
    X_v = a2 v + b2 w + c2 m        w_u = -e1 w + 2 f1 m
                                    m_u = f1 v + g1 w

(and likewise e2, f2, g2 for v-derivatives), together with the first
partials of a1, b1, c1, c2 that the classification predicates need.
All of these are exact symbolic derivatives of the defining inner
products, so sign tests on them are noise-free.

Surfaces handled here satisfy a2 = b2 = 0: the v-tangent is
proportional to m.  That condition is validated, not normalised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import LcframeError
from .expr import (
    Add, CompiledField, Const, Mul, Neg, Sub, constant_value, parse, simplify,
)
from .minkowski import LVec3, pseudo_dot, wedge

__all__ = [
    "DomainBox",
    "LightconeFrame",
    "BasicInvariants",
    "FramedValidationReport",
    "SurfaceDef",
    "SurfaceFormatError",
    "frame_at",
    "basic_invariants_at",
    "validate_framed",
]

SIGNATURE = (-1.0, 1.0, 1.0)


class SurfaceFormatError(LcframeError):
    """A surface definition file or dictionary is malformed."""


@dataclass(frozen=True)
class DomainBox:
    """Closed parameter rectangle [u_min, u_max] x [v_min, v_max]."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise SurfaceFormatError(
                f"degenerate domain box {self.u_min, self.u_max, self.v_min, self.v_max}")

    def contains(self, u: float, v: float, slack: float = 1e-12) -> bool:
        return (self.u_min - slack <= u <= self.u_max + slack
                and self.v_min - slack <= v <= self.v_max + slack)

    def grid(self, nu: int, nv: int):
        """Closed sampling: both endpoints of each interval included."""
        if nu < 2 or nv < 2:
            raise LcframeError(f"grid resolution must be at least 2x2, got {nu}x{nv}")
        us = [self.u_min + (self.u_max - self.u_min) * i / (nu - 1) for i in range(nu)]
        vs = [self.v_min + (self.v_max - self.v_min) * j / (nv - 1) for j in range(nv)]
        return us, vs


@dataclass(frozen=True)
class LightconeFrame:
    """Frame triple at a point: lightlike pair (v, w) and the unit
    spacelike leg m = -(1/2) v^w."""

    v: LVec3
    w: LVec3
    m: LVec3


@dataclass(frozen=True)
class BasicInvariants:
    """The twelve frame coefficients and the partials used by the
    classification sign tests, all at a single point."""

    a1: float
    b1: float
    c1: float
    a2: float
    b2: float
    c2: float
    e1: float
    f1: float
    g1: float
    e2: float
    f2: float
    g2: float
    a1u: float
    a1v: float
    b1u: float
    b1v: float
    c1u: float
    c1v: float
    c2u: float
    c2v: float


@dataclass(frozen=True)
class FramedValidationReport:
    """Grid-sampled residuals of the framed-surface conditions.

    wedge residual: largest component of X_u^X_v - (alpha v + beta w)
    with alpha = -a1*c2 and beta = b1*c2; pair residual: worst failure
    of the lightlike-pair conditions <v,v> = <w,w> = 0, <v,w> = -2.
    A surface is admitted when every residual is below tolerance.
    """

    grid: tuple
    tol: float
    max_wedge_residual: float
    max_delta4_residual: float
    max_abs_a2: float
    max_abs_b2: float
    max_abs_alpha: float
    max_abs_beta: float
    admitted: bool
    witness: tuple | None  # (u, v, check_name, value) for the first failure


def _pdot_expr(a, b):
    """Inner-product expression of two component-expression triples."""
    terms = []
    for sig, ai, bi in zip(SIGNATURE, a, b):
        t = Mul(ai, bi)
        terms.append(Neg(t) if sig < 0 else t)
    return Add(Add(terms[0], terms[1]), terms[2])


def _wedge_expr(a, b):
    """Component expressions of the Lorentzian cross product."""
    return (
        Neg(Sub(Mul(a[1], b[2]), Mul(a[2], b[1]))),
        Sub(Mul(a[2], b[0]), Mul(a[0], b[2])),
        Sub(Mul(a[0], b[1]), Mul(a[1], b[0])),
    )


def _half(e):
    return Mul(Const(0.5), e)


class SurfaceDef:
    """Compiled surface triple with its symbolic invariant fields.

    Instances are immutable after construction; every per-point
    evaluation is pure, so a SurfaceDef may be shared freely across
    threads.
    """

    #: derivative order compiled for the position components.  Three
    #: orders are kept so cusp-direction quantities that involve third
    #: derivatives can be cross-checked numerically.
    X_ORDER = 3
    FRAME_ORDER = 1

    def __init__(self, name, x_sources, v_sources, w_sources, domain):
        self.name = str(name)
        if not isinstance(domain, DomainBox):
            domain = DomainBox(*domain)
        self.domain = domain
        self.x = tuple(self._compile(s, self.X_ORDER) for s in x_sources)
        self.frame_v = tuple(self._compile(s, self.FRAME_ORDER) for s in v_sources)
        self.frame_w = tuple(self._compile(s, self.FRAME_ORDER) for s in w_sources)
        if len(self.x) != 3 or len(self.frame_v) != 3 or len(self.frame_w) != 3:
            raise SurfaceFormatError("X, v and w each need exactly 3 components")
        self._build_invariant_fields()

    @staticmethod
    def _compile(source, order):
        if isinstance(source, CompiledField):
            return source
        expr = parse(source) if isinstance(source, str) else source
        return CompiledField(expr, order)

    # -- construction of the symbolic invariant table -------------------

    def _build_invariant_fields(self):
        xu = tuple(f.derivative_expr(1, 0) for f in self.x)
        xv = tuple(f.derivative_expr(0, 1) for f in self.x)
        fv = tuple(f.expr for f in self.frame_v)
        fw = tuple(f.expr for f in self.frame_w)
        fv_u = tuple(f.derivative_expr(1, 0) for f in self.frame_v)
        fv_v = tuple(f.derivative_expr(0, 1) for f in self.frame_v)
        fw_u = tuple(f.derivative_expr(1, 0) for f in self.frame_w)
        fw_v = tuple(f.derivative_expr(0, 1) for f in self.frame_w)

        m = tuple(Neg(_half(c)) for c in _wedge_expr(fv, fw))
        self.frame_m = tuple(CompiledField(c, 1) for c in m)

        base = {
            "a1": Neg(_half(_pdot_expr(xu, fw))),
            "b1": Neg(_half(_pdot_expr(xu, fv))),
            "c1": _pdot_expr(xu, m),
            "a2": Neg(_half(_pdot_expr(xv, fw))),
            "b2": Neg(_half(_pdot_expr(xv, fv))),
            "c2": _pdot_expr(xv, m),
            "e1": _half(_pdot_expr(fv, fw_u)),
            "f1": _half(_pdot_expr(fw_u, m)),
            "g1": _half(_pdot_expr(fv_u, m)),
            "e2": _half(_pdot_expr(fv, fw_v)),
            "f2": _half(_pdot_expr(fw_v, m)),
            "g2": _half(_pdot_expr(fv_v, m)),
        }
        scalars = {k: simplify(v) for k, v in base.items()}
        partials = {}
        for name in ("a1", "b1", "c1", "c2"):
            field = CompiledField(scalars[name], 1)
            partials[name + "u"] = field.derivative_expr(1, 0)
            partials[name + "v"] = field.derivative_expr(0, 1)
        scalars.update(partials)
        scalars["lambda_til"] = simplify(
            Mul(Const(-4.0), Mul(base["a1"], base["b1"])))
        self._scalar_fields = {k: CompiledField(v, 0) for k, v in scalars.items()}

    # -- point evaluation ------------------------------------------------

    def scalar(self, name: str, u: float, v: float) -> float:
        return self._scalar_fields[name].eval(u, v)

    def scalar_field(self, name: str) -> CompiledField:
        return self._scalar_fields[name]

    def _vec(self, fields, du, dv, u, v):
        return LVec3(*(f.eval_derivative(du, dv, u, v) for f in fields))

    def position(self, u, v) -> LVec3:
        return self._vec(self.x, 0, 0, u, v)

    def x_u(self, u, v) -> LVec3:
        return self._vec(self.x, 1, 0, u, v)

    def x_v(self, u, v) -> LVec3:
        return self._vec(self.x, 0, 1, u, v)

    def x_uu(self, u, v) -> LVec3:
        return self._vec(self.x, 2, 0, u, v)

    def x_uv(self, u, v) -> LVec3:
        return self._vec(self.x, 1, 1, u, v)

    def x_vv(self, u, v) -> LVec3:
        return self._vec(self.x, 0, 2, u, v)

    def x_uvv(self, u, v) -> LVec3:
        return self._vec(self.x, 1, 2, u, v)

    def x_vvv(self, u, v) -> LVec3:
        return self._vec(self.x, 0, 3, u, v)

    def frame_vec_v(self, u, v, du=0, dv=0) -> LVec3:
        return self._vec(self.frame_v, du, dv, u, v)

    def frame_vec_w(self, u, v, du=0, dv=0) -> LVec3:
        return self._vec(self.frame_w, du, dv, u, v)

    def frame_vec_m(self, u, v, du=0, dv=0) -> LVec3:
        return self._vec(self.frame_m, du, dv, u, v)

    def require_in_domain(self, u, v):
        if not self.domain.contains(u, v):
            raise LcframeError(
                f"point ({u!r}, {v!r}) outside the domain of surface {self.name!r}")

    # -- serialisation helpers -------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceDef":
        try:
            name = data["name"]
            x = data["X"]
            v = data["v"]
            w = data["w"]
            dom = data["domain"]
        except KeyError as exc:
            raise SurfaceFormatError(f"missing surface key: {exc.args[0]!r}") from None
        for key, comp in (("X", x), ("v", v), ("w", w)):
            if not isinstance(comp, (list, tuple)) or len(comp) != 3:
                raise SurfaceFormatError(f"surface key {key!r} must list 3 expressions")
        try:
            bounds = [_bound(dom["u"][0]), _bound(dom["u"][1]),
                      _bound(dom["v"][0]), _bound(dom["v"][1])]
        except (KeyError, IndexError, TypeError):
            raise SurfaceFormatError(
                "domain must be {'u': [lo, hi], 'v': [lo, hi]}") from None
        return cls(name, x, v, w, DomainBox(*bounds))

    @classmethod
    def from_file(cls, path) -> "SurfaceDef":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise SurfaceFormatError(f"cannot read surface file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise SurfaceFormatError(f"surface file {path} is not valid JSON: {exc}") from None
        return cls.from_dict(data)


def _bound(value):
    if isinstance(value, (int, float)):
        return float(value)
    return constant_value(str(value))


def frame_at(s: SurfaceDef, u: float, v: float) -> LightconeFrame:
    """Evaluate the frame triple (v, w, m) at a parameter point."""
    s.require_in_domain(u, v)
    return LightconeFrame(
        v=s.frame_vec_v(u, v),
        w=s.frame_vec_w(u, v),
        m=s.frame_vec_m(u, v),
    )


def basic_invariants_at(s: SurfaceDef, u: float, v: float) -> BasicInvariants:
    """Evaluate the twelve frame coefficients and their tracked partials."""
    s.require_in_domain(u, v)
    g = s.scalar
    return BasicInvariants(
        a1=g("a1", u, v), b1=g("b1", u, v), c1=g("c1", u, v),
        a2=g("a2", u, v), b2=g("b2", u, v), c2=g("c2", u, v),
        e1=g("e1", u, v), f1=g("f1", u, v), g1=g("g1", u, v),
        e2=g("e2", u, v), f2=g("f2", u, v), g2=g("g2", u, v),
        a1u=g("a1u", u, v), a1v=g("a1v", u, v),
        b1u=g("b1u", u, v), b1v=g("b1v", u, v),
        c1u=g("c1u", u, v), c1v=g("c1v", u, v),
        c2u=g("c2u", u, v), c2v=g("c2v", u, v),
    )


def validate_framed(s: SurfaceDef, grid=(16, 16), tol: float = 1e-8) -> FramedValidationReport:
    """Check the framed-surface conditions over a sample grid.

    Verifies at each grid point that (v, w) is an admissible lightlike
    pair, that a2 and b2 vanish, and that X_u ^ X_v = -a1*c2 v + b1*c2 w.
    The report carries the worst residuals and, on failure, the first
    witness point.
    """
    nu, nv = grid
    us, vs = s.domain.grid(nu, nv)
    max_wedge = max_pair = max_a2 = max_b2 = max_alpha = max_beta = 0.0
    witness = None

    for u in us:
        for v in vs:
            fr = frame_at(s, u, v)
            pair_res = max(
                abs(pseudo_dot(fr.v, fr.v)),
                abs(pseudo_dot(fr.w, fr.w)),
                abs(pseudo_dot(fr.v, fr.w) + 2.0),
            )
            scale = 1.0 + max(fr.v.max_abs(), fr.w.max_abs()) ** 2
            max_pair = max(max_pair, pair_res)
            if pair_res > tol * scale and witness is None:
                witness = (u, v, "lightlike-pair", pair_res)

            inv = basic_invariants_at(s, u, v)
            max_a2 = max(max_a2, abs(inv.a2))
            max_b2 = max(max_b2, abs(inv.b2))
            if abs(inv.a2) > tol and witness is None:
                witness = (u, v, "a2", inv.a2)
            if abs(inv.b2) > tol and witness is None:
                witness = (u, v, "b2", inv.b2)

            alpha = -inv.a1 * inv.c2
            beta = inv.b1 * inv.c2
            max_alpha = max(max_alpha, abs(alpha))
            max_beta = max(max_beta, abs(beta))
            lhs = wedge(s.x_u(u, v), s.x_v(u, v))
            rhs = fr.v.scaled(alpha) + fr.w.scaled(beta)
            res = (lhs - rhs).max_abs()
            wedge_scale = 1.0 + lhs.max_abs()
            max_wedge = max(max_wedge, res)
            if res > tol * wedge_scale and witness is None:
                witness = (u, v, "wedge-decomposition", res)

    return FramedValidationReport(
        grid=(nu, nv),
        tol=tol,
        max_wedge_residual=max_wedge,
        max_delta4_residual=max_pair,
        max_abs_a2=max_a2,
        max_abs_b2=max_b2,
        max_abs_alpha=max_alpha,
        max_abs_beta=max_beta,
        admitted=witness is None,
        witness=witness,
    )
