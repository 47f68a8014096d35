"""Point classification, null directions, and zero-set tracing.

The taxonomy is driven entirely by sign tests on a1, b1, c2 and their
first partials:

* both a1 and b1 vanish        -> rank-two singular point (labelled only)
* c2 vanishes (a1, b1 not both) -> rank-one singular point; the kind is
  decided by c2v, degeneracy by dc2
* exactly one of a1, b1 vanishes with c2 != 0 -> lightlike point; the
  vanishing factor is the local defining function of the locus, so its
  differential decides degeneracy and its transversality test the kind
* otherwise the sign of lam~ = -4 a1 b1 separates spacelike (positive)
  from timelike (negative)

Loci are traced as zero sets of lam~ (lightlike locus) or c2 (rank-one
singular locus) by marching squares with bisection refinement.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .curvature import CurvaturePacket, curvature_packet, is_zero, singular_curvatures
from .errors import LcframeError
from .minkowski import pseudo_dot
from .surface import BasicInvariants, SurfaceDef, basic_invariants_at
from .taxonomy import Category, Kind, LightlikeBranch, PointClass

__all__ = [
    "classify",
    "NullVector",
    "null_vector",
    "LocusPolyline",
    "trace_zero_set",
    "LineOfCurvatureReport",
    "line_of_curvature_test",
    "ClassificationRow",
    "ClassificationTable",
    "classify_grid",
    "second_kind_admissibility_hint",
    "WrongClassError",
    "CSV_HEADER",
]

CSV_HEADER = ("u", "v", "category", "sub", "kind", "degenerate",
              "lambda_til", "c2", "Ktil", "Htil", "K", "H", "kappa_til_1")

TRACEABLE_FIELDS = ("lambda_til", "c2")

_BISECT_MAX_ITER = 30


class WrongClassError(LcframeError):
    """An operation was asked about a point of the wrong class."""


def _classify_from_invariants(inv: BasicInvariants, tol: float) -> PointClass:
    if math.hypot(inv.a1, inv.b1) <= tol:
        return PointClass(Category.SINGULAR_2)
    if abs(inv.c2) <= tol:
        degenerate = math.hypot(inv.c2u, inv.c2v) <= tol
        if degenerate:
            kind = Kind.INDETERMINATE
        else:
            kind = Kind.FIRST if abs(inv.c2v) > tol else Kind.SECOND
        return PointClass(Category.SINGULAR_1, degenerate=degenerate, kind=kind)
    a1_zero = abs(inv.a1) <= tol
    b1_zero = abs(inv.b1) <= tol
    if a1_zero != b1_zero:
        if a1_zero:
            branch = LightlikeBranch.L1
            differential = (inv.a1u, inv.a1v)
            transversal = inv.a1u * inv.c2 - inv.a1v * inv.c1
        else:
            branch = LightlikeBranch.L2
            differential = (inv.b1u, inv.b1v)
            transversal = inv.b1u * inv.c2 - inv.b1v * inv.c1
        degenerate = math.hypot(*differential) <= tol
        if degenerate:
            kind = Kind.INDETERMINATE
        else:
            kind = Kind.FIRST if abs(transversal) > tol else Kind.SECOND
        return PointClass(Category.LIGHTLIKE, lightlike_branch=branch,
                          degenerate=degenerate, kind=kind)
    lam = -4.0 * inv.a1 * inv.b1
    return PointClass(Category.SPACELIKE if lam > 0.0 else Category.TIMELIKE)


def classify(s: SurfaceDef, u: float, v: float, tol: float = 1e-9) -> PointClass:
    """Classify one parameter point at the given tolerance."""
    if tol <= 0:
        raise LcframeError("classification tolerance must be positive")
    s.require_in_domain(u, v)
    return _classify_from_invariants(basic_invariants_at(s, u, v), tol)


@dataclass(frozen=True)
class NullVector:
    """Parameter-space direction eta whose image under dX is lightlike
    (or zero, at a singular point).  `residual` is <dX(eta), dX(eta)>."""

    eta: tuple
    residual: float


def null_vector(s: SurfaceDef, u: float, v: float, tol: float = 1e-9) -> NullVector:
    """Null direction at a lightlike or rank-one singular point.

    Lightlike points carry eta = c2 d_u - c1 d_v; at a rank-one singular
    point the v-direction itself is null because X_v vanishes.  Raises
    WrongClassError elsewhere.
    """
    pc = classify(s, u, v, tol)
    inv = basic_invariants_at(s, u, v)
    if pc.category is Category.LIGHTLIKE:
        eta = (inv.c2, -inv.c1)
    elif pc.category is Category.SINGULAR_1:
        eta = (0.0, 1.0)
    else:
        raise WrongClassError(
            f"null vector needs a lightlike or rank-one singular point, "
            f"got {pc.category.value} at ({u}, {v})")
    dx = s.x_u(u, v).scaled(eta[0]) + s.x_v(u, v).scaled(eta[1])
    return NullVector(eta=eta, residual=pseudo_dot(dx, dx))


# ---------------------------------------------------------------------------
# Zero-set tracing


@dataclass
class LocusPolyline:
    """A traced connected component of a field's zero set.

    vertices are (u, v) parameter points ordered along the curve;
    residuals are |field| at each vertex; degenerate flags whether the
    classification at the vertex reports a degenerate point (None when
    the vertex classifies off-locus at the refinement tolerance).
    """

    field: str
    vertices: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    degenerate: list = field(default_factory=list)
    closed: bool = False


def _bisect_edge(f, p0, p1, f0, f1, refine_tol):
    """Refine a sign-change along the segment p0-p1 to |f| <= refine_tol."""
    if f0 == 0.0:
        return p0, 0.0
    if f1 == 0.0:
        return p1, 0.0
    best_p, best_f = (p0, abs(f0)) if abs(f0) < abs(f1) else (p1, abs(f1))
    for _ in range(_BISECT_MAX_ITER):
        mid = ((p0[0] + p1[0]) / 2.0, (p0[1] + p1[1]) / 2.0)
        fm = f(*mid)
        if abs(fm) < best_f:
            best_p, best_f = mid, abs(fm)
        if abs(fm) <= refine_tol:
            return mid, abs(fm)
        if (fm > 0.0) == (f0 > 0.0):
            p0, f0 = mid, fm
        else:
            p1, f1 = mid, fm
    return best_p, best_f


_SEGMENT_TABLE = {
    # corner sign pattern (bl, br, tr, tl), True = positive -> edge pairs;
    # edges are 0 bottom, 1 right, 2 top, 3 left
    (False, False, False, False): (),
    (True, True, True, True): (),
    (True, False, False, False): ((3, 0),),
    (False, True, False, False): ((0, 1),),
    (False, False, True, False): ((1, 2),),
    (False, False, False, True): ((2, 3),),
    (True, True, False, False): ((3, 1),),
    (False, True, True, False): ((0, 2),),
    (False, False, True, True): ((1, 3),),
    (True, False, False, True): ((0, 2),),
    (True, True, True, False): ((2, 3),),
    (True, True, False, True): ((1, 2),),
    (True, False, True, True): ((0, 1),),
    (False, True, True, True): ((3, 0),),
    # saddles resolved by the centre sample at call time
    (True, False, True, False): None,
    (False, True, False, True): None,
}


def trace_zero_set(
    s: SurfaceDef,
    field_name: str,
    resolution=(64, 64),
    refine_tol: float = 1e-9,
    classify_tol: float = 1e-9,
) -> list:
    """Trace the zero set of lam~ or c2 over the domain grid.

    Marching squares on the sample grid; every edge crossing is refined
    by bisection until |field| <= refine_tol (at most 30 halvings), and
    the resulting segments are linked into polylines.  Returns a list of
    LocusPolyline, possibly empty.
    """
    if field_name not in TRACEABLE_FIELDS:
        raise LcframeError(
            f"traceable fields are {TRACEABLE_FIELDS}, got {field_name!r}")
    nu, nv = resolution
    if nu < 8 or nv < 8:
        raise LcframeError(f"trace resolution must be at least 8x8, got {nu}x{nv}")
    if refine_tol <= 0:
        raise LcframeError("refinement tolerance must be positive")
    fld = s.scalar_field(field_name)
    f = fld.eval
    us, vs = s.domain.grid(nu, nv)
    values = [[f(u, v) for v in vs] for u in us]

    # refined crossing per grid edge, keyed so neighbouring cells share
    # vertices exactly
    crossings = {}

    def edge_point(key, pa, pb, fa, fb):
        if key not in crossings:
            crossings[key] = _bisect_edge(f, pa, pb, fa, fb, refine_tol)
        return key

    def has_crossing(fa, fb):
        return (fa > 0.0) != (fb > 0.0) or fa == 0.0 or fb == 0.0

    segments = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            corners = (values[i][j], values[i + 1][j],
                       values[i + 1][j + 1], values[i][j + 1])
            pattern = tuple(c > 0.0 for c in corners)
            pairs = _SEGMENT_TABLE[pattern]
            if pairs == ():
                continue
            pts = ((us[i], vs[j]), (us[i + 1], vs[j]),
                   (us[i + 1], vs[j + 1]), (us[i], vs[j + 1]))
            edge_defs = (
                ((i, j, "u"), pts[0], pts[1], corners[0], corners[1]),   # bottom
                ((i + 1, j, "v"), pts[1], pts[2], corners[1], corners[2]),  # right
                ((i, j + 1, "u"), pts[3], pts[2], corners[3], corners[2]),  # top
                ((i, j, "v"), pts[0], pts[3], corners[0], corners[3]),   # left
            )
            if pairs is None:
                # ambiguous saddle: the centre sample picks the pairing
                centre = f((us[i] + us[i + 1]) / 2.0, (vs[j] + vs[j + 1]) / 2.0)
                if (centre > 0.0) == pattern[0]:
                    pairs = ((0, 1), (2, 3))
                else:
                    pairs = ((3, 0), (1, 2))
            for ea, eb in pairs:
                keys = []
                for e in (ea, eb):
                    key, pa, pb, fa, fb = edge_defs[e]
                    if not has_crossing(fa, fb):
                        keys = []
                        break
                    keys.append(edge_point(key, pa, pb, fa, fb))
                if len(keys) == 2 and keys[0] != keys[1]:
                    segments.append((keys[0], keys[1]))

    return _link_segments(s, field_name, segments, crossings, classify_tol)


def _link_segments(s, field_name, segments, crossings, classify_tol):
    adjacency = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    used = set()
    polylines = []

    def walk(start):
        chain = [start]
        seen_edges = set()
        current = start
        while True:
            step = None
            for nxt in adjacency[current]:
                edge = frozenset((current, nxt))
                if edge not in seen_edges:
                    step = nxt
                    seen_edges.add(edge)
                    break
            if step is None:
                break
            chain.append(step)
            current = step
            if current == start:
                break
        return chain

    openings = sorted(k for k, nbrs in adjacency.items() if len(nbrs) == 1)
    for start in openings:
        if start in used:
            continue
        chain = walk(start)
        if all(k not in used for k in chain):
            used.update(chain)
            polylines.append((chain, False))
    for start in sorted(adjacency):
        if start in used:
            continue
        chain = walk(start)
        closed = len(chain) > 1 and chain[0] == chain[-1]
        if closed:
            chain = chain[:-1]
        used.update(chain)
        polylines.append((chain, closed))

    expected = (Category.LIGHTLIKE if field_name == "lambda_til"
                else Category.SINGULAR_1)
    out = []
    for chain, closed in polylines:
        if len(chain) < 2:
            continue
        poly = LocusPolyline(field=field_name, closed=closed)
        for key in chain:
            (u, v), residual = crossings[key]
            poly.vertices.append((u, v))
            poly.residuals.append(residual)
            pc = classify(s, u, v, classify_tol)
            poly.degenerate.append(
                pc.degenerate if pc.category is expected else None)
        out.append(poly)
    out.sort(key=lambda p: p.vertices[0])
    return out


# ---------------------------------------------------------------------------
# Line-of-curvature criterion at rank-one singular points


@dataclass(frozen=True)
class LineOfCurvatureReport:
    """Whether the singular locus through the point is a line of
    curvature.

    The defining criterion is the vanishing of the derivative of c2
    along the bounded principal direction, (V1 . grad c2)(p) = 0.  For a
    first kind point this is equivalent to the torsion scalar
    kappa_t~ hitting 2(M~E~ - L~F~)/E~ (positive E~) or 2M~ (negative
    E~); for a second kind point it reduces to N~ = 0.  Both routes are
    reported along with their agreement."""

    applicable: bool
    reason: str | None
    kind: Kind | None = None
    is_line_of_curvature: bool | None = None
    directional_derivative: float | None = None
    kappa_t_til: float | None = None
    kappa_t_target: float | None = None
    routes_agree: bool | None = None


def line_of_curvature_test(
    s: SurfaceDef, u: float, v: float, tol: float = 1e-9
) -> LineOfCurvatureReport:
    """Run the line-of-curvature criterion at a rank-one singular point."""
    pc = classify(s, u, v, tol)
    if pc.category is not Category.SINGULAR_1 or pc.degenerate:
        return LineOfCurvatureReport(
            applicable=False,
            reason=f"needs a non-degenerate rank-one singular point, got "
                   f"{pc.category.value}{' (degenerate)' if pc.degenerate else ''}")
    p = curvature_packet(s, u, v)
    scale = (p.Etil, p.Ltil, p.Ntil)
    if is_zero(p.Etil, *scale):
        return LineOfCurvatureReport(applicable=False, reason="Etil~0", kind=pc.kind)
    inv = basic_invariants_at(s, u, v)

    if pc.kind is Kind.SECOND:
        # V1 = (Ntil, ...) and c2v = 0, so the criterion is Ntil = 0
        loc = is_zero(p.Ntil, *scale)
        dd = inv.c2u * p.Ntil
        return LineOfCurvatureReport(
            applicable=True, reason=None, kind=pc.kind,
            is_line_of_curvature=loc,
            directional_derivative=dd,
            routes_agree=loc == is_zero(dd, *scale),
        )

    sc = singular_curvatures(s, u, v)
    if sc.kappa_t_til is None:
        return LineOfCurvatureReport(applicable=False, reason="c2v~0", kind=pc.kind)
    if p.Etil > 0:
        target = 2.0 * (p.Mtil * p.Etil - p.Ltil * p.Ftil) / p.Etil
    else:
        target = 2.0 * p.Mtil
    loc_torsion = abs(sc.kappa_t_til - target) <= 1e-8 * (1.0 + abs(target))
    kappa1 = p.Ltil / p.Etil  # bounded branch at a rank-one singular point
    v1 = (p.Ntil, -p.Mtil + kappa1 * p.Ftil)
    dd = inv.c2u * v1[0] + inv.c2v * v1[1]
    loc_direct = is_zero(dd, *scale)
    return LineOfCurvatureReport(
        applicable=True, reason=None, kind=pc.kind,
        is_line_of_curvature=loc_direct,
        directional_derivative=dd,
        kappa_t_til=sc.kappa_t_til,
        kappa_t_target=target,
        routes_agree=loc_torsion == loc_direct,
    )


# ---------------------------------------------------------------------------
# Grid classification


@dataclass(frozen=True)
class ClassificationRow:
    u: float
    v: float
    point_class: PointClass
    packet: CurvaturePacket
    c2: float


@dataclass
class ClassificationTable:
    """Row-major (u outer, v inner) classification of a sample grid."""

    surface: str
    resolution: tuple
    tol: float
    rows: list

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            pc, p = row.point_class, row.packet
            writer.writerow([
                _fmt(row.u), _fmt(row.v),
                pc.category.value,
                pc.lightlike_branch.value if pc.lightlike_branch else "",
                pc.kind.value if pc.kind else "",
                "" if pc.degenerate is None else str(pc.degenerate).lower(),
                _fmt(p.lambda_til),
                _fmt(row.c2),
                _fmt(p.Ktil), _fmt(p.Htil),
                _fmt(p.K), _fmt(p.H),
                _fmt(p.kappa_til_1),
            ])


def _fmt(x):
    if x is None:
        return ""
    return format(float(x), ".12g")


def classify_grid(
    s: SurfaceDef, resolution=(32, 32), tol: float = 1e-9
) -> ClassificationTable:
    """Classify every point of a closed sample grid.

    Rows are emitted u-major then v, so identical configurations yield
    byte-identical CSV output."""
    nu, nv = resolution
    us, vs = s.domain.grid(nu, nv)  # validates >= 2x2
    rows = []
    for u in us:
        for v in vs:
            inv = basic_invariants_at(s, u, v)
            pc = _classify_from_invariants(inv, tol)
            packet = curvature_packet(s, u, v)
            rows.append(ClassificationRow(
                u=u, v=v, point_class=pc, packet=packet, c2=inv.c2))
    return ClassificationTable(surface=s.name, resolution=(nu, nv), tol=tol, rows=rows)


def second_kind_admissibility_hint(
    s: SurfaceDef, u: float, v: float,
    probe_radius: float = 1e-3, probes: int = 32, tol: float = 1e-9,
):
    """Experimental: probe whether a second kind lightlike point looks
    admissible (approachable by first kind lightlike points).

    Walks a small circle of probes, keeps those that classify lightlike,
    and reports whether any is first kind.  This is sampling evidence
    only -- a True result exhibits nearby first kind points, a False
    result cannot refute their existence.
    """
    pc = classify(s, u, v, tol)
    if pc.category is not Category.LIGHTLIKE or pc.kind is not Kind.SECOND:
        raise WrongClassError("admissibility hint needs a second kind lightlike point")
    found_first = False
    lightlike_probes = 0
    for k in range(probes):
        ang = 2.0 * math.pi * k / probes
        uu = u + probe_radius * math.cos(ang)
        vv = v + probe_radius * math.sin(ang)
        if not s.domain.contains(uu, vv):
            continue
        # snap the probe back onto the locus along the v-direction is not
        # attempted; a loose tolerance keeps near-locus probes visible
        probe_pc = classify(s, uu, vv, max(tol, probe_radius * probe_radius))
        if probe_pc.category is Category.LIGHTLIKE:
            lightlike_probes += 1
            if probe_pc.kind is Kind.FIRST:
                found_first = True
    return {"admissible_hint": found_first, "lightlike_probes": lightlike_probes}
