"""Tangent-line concurrency and the rectangular-hyperbola construction.

For any planar three-body motion with fixed center of mass and zero angular
momentum, the three tangent lines through the bodies meet at one point c
(possibly at infinity).  For the lemniscate choreography that point sweeps
the rectangular hyperbola cx^2 - cy^2 = 1.

Two construction procedures are implemented and cross-validated:

  * from a point c on the hyperbola: draw the (generically four) tangent
    lines to the lemniscate from c and keep the three contact points whose
    quadrant differs from c's; equivalently, the three that move forward
    (phase increasing) when c is nudged up along the hyperbola.
  * from one body position: intersect its tangent line with the hyperbola,
    keep the intersection in a different quadrant (equivalently the one that
    moves up when the body moves forward), then proceed as above.

Quadrants are numbered 1..4 counterclockwise from (+,+); points within
EPS_AXIS of a coordinate axis make the selection rules ambiguous and raise
instead of guessing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

from .elliptic import EllipticContext
from .orbit import TripleState, Vec2, position, triple, velocity

EPS_AXIS = 1e-8
PARALLEL_TOL = 1e-10
SCAN_NODES = 4096
BISECT_TOL = 1e-13
PERTURB = 1e-5
DISC_TOL = 1e-12


class AxisAmbiguityError(ValueError):
    """A quadrant-based selection rule was asked about a point on an axis."""


class MethodDisagreementError(RuntimeError):
    """The forward-motion rule and the quadrant rule selected different sets."""


class NoIntersectionError(ValueError):
    """A tangent line misses the rectangular hyperbola."""


@dataclass(frozen=True)
class ConcurrencyPoint:
    """Common intersection of the three tangent lines, c = x_i + lambda_i v_i."""

    c: Vec2
    lambdas: tuple[float, float, float]
    finite: bool


@dataclass(frozen=True)
class TangencyCandidate:
    """A point of the lemniscate whose tangent line passes through a query point."""

    s: float
    point: Vec2
    quadrant: int


def quadrant(p: Vec2) -> int:
    """1..4 counterclockwise from (+,+); raises within EPS_AXIS of an axis."""
    if abs(p.x) < EPS_AXIS or abs(p.y) < EPS_AXIS:
        raise AxisAmbiguityError(f"point {p} lies within {EPS_AXIS} of an axis")
    if p.x > 0.0:
        return 1 if p.y > 0.0 else 4
    return 2 if p.y > 0.0 else 3


def concurrency_point(s: TripleState) -> ConcurrencyPoint:
    """Intersection point of the three tangent lines of a triple.

    lambda_i = ((x_j - x_i) x v_j) / (v_i x v_j) and, per velocity pair,
    c = -(l_i v_j - l_j v_i) / (v_i x v_j) with l_i = x_i x v_i.  All finite
    pair formulas must agree; if every pair of velocities is parallel the
    lines meet at infinity and finite=False is returned.
    """
    xs = s.positions
    vs = s.velocities
    ls = [xs[i].cross(vs[i]) for i in range(3)]

    cs = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        vv = vs[i].cross(vs[j])
        if abs(vv) < PARALLEL_TOL:
            continue
        cs.append(Vec2(-(ls[i] * vs[j].x - ls[j] * vs[i].x) / vv,
                       -(ls[i] * vs[j].y - ls[j] * vs[i].y) / vv))
    if not cs:
        return ConcurrencyPoint(c=Vec2(math.inf, math.inf), lambdas=(math.inf,) * 3,
                                finite=False)
    c = Vec2(sum(p.x for p in cs) / len(cs), sum(p.y for p in cs) / len(cs))

    lambdas = []
    for i in range(3):
        j = (i + 1) % 3
        vv = vs[i].cross(vs[j])
        if abs(vv) < PARALLEL_TOL:
            j = (i + 2) % 3
            vv = vs[i].cross(vs[j])
        lambdas.append((xs[j] - xs[i]).cross(vs[j]) / vv)
    return ConcurrencyPoint(c=c, lambdas=tuple(lambdas), finite=True)


def hyperbola_residual(c: Vec2) -> float:
    """cx^2 - cy^2 - 1; zero exactly on the rectangular hyperbola."""
    return c.x * c.x - c.y * c.y - 1.0


@lru_cache(maxsize=4)
def _scan_grid(ctx: EllipticContext, n: int):
    # Orbit samples reused by every tangency scan against the same context.
    period = ctx.period
    xs, vs = [], []
    for j in range(n):
        s = j * period / n
        xs.append(position(s, ctx))
        vs.append(velocity(s, ctx))
    return xs, vs


def _tangency_gap(c: Vec2, s: float, ctx: EllipticContext) -> float:
    # Zero exactly when the tangent line at phase s passes through c.
    return (c - position(s, ctx)).cross(velocity(s, ctx))


def tangents_from_point(
    c: Vec2, ctx: EllipticContext, n_scan: int = SCAN_NODES
) -> list[TangencyCandidate]:
    """All orbit phases whose tangent line passes through c.

    Dense scan over one period brackets the sign changes of the tangency gap
    g(s) = (c - x(s)) x v(s); each bracket is bisected to BISECT_TOL in s.
    Generically four candidates exist; any other count emits a warning.
    """
    period = ctx.period
    xs, vs = _scan_grid(ctx, n_scan)
    g = [(c - xs[j]).cross(vs[j]) for j in range(n_scan)]
    roots = []
    for j in range(n_scan):
        gj, gk = g[j], g[(j + 1) % n_scan]
        a = j * period / n_scan
        if gj == 0.0:
            roots.append(a)
            continue
        if gj * gk >= 0.0:
            continue
        b = (j + 1) * period / n_scan
        fa = gj
        while b - a > BISECT_TOL:
            mid = 0.5 * (a + b)
            fm = _tangency_gap(c, mid, ctx)
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))

    merged: list[float] = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-9:
            merged.append(r)
    if len(merged) > 1 and (merged[0] + period) - merged[-1] <= 1e-9:
        merged.pop()

    out = [TangencyCandidate(s=r, point=position(r, ctx), quadrant=_quadrant_or_zero(position(r, ctx)))
           for r in merged]
    if len(out) != 4:
        warnings.warn(
            f"expected 4 tangency candidates from {c}, found {len(out)}",
            stacklevel=2,
        )
    return out


def _quadrant_or_zero(p: Vec2) -> int:
    try:
        return quadrant(p)
    except AxisAmbiguityError:
        return 0


def _wrap(ds: float, period: float) -> float:
    return ds - period * round(ds / period)


def _nudge_up_hyperbola(c: Vec2, delta: float) -> Vec2:
    # Move along the hyperbola branch of c, increasing y by delta.
    y = c.y + delta
    return Vec2(math.copysign(math.sqrt(1.0 + y * y), c.x), y)


def select_choreographic(
    c: Vec2,
    candidates: list[TangencyCandidate],
    ctx: EllipticContext,
) -> list[TangencyCandidate]:
    """Pick the three contact points that are choreographic partners of c.

    Quadrant rule: keep candidates whose quadrant differs from c's.  The
    forward rule is then run as a cross-check: after nudging c up the
    hyperbola by PERTURB, the kept phases must advance and the discarded one
    must retreat; disagreement raises MethodDisagreementError.
    """
    if len(candidates) != 4:
        raise ValueError(f"need exactly 4 candidates, got {len(candidates)}")
    qc = quadrant(c)
    for cand in candidates:
        if cand.quadrant == 0:
            raise AxisAmbiguityError(f"candidate at s={cand.s} lies on an axis")

    selected = [cand for cand in candidates if cand.quadrant != qc]
    rejected = [cand for cand in candidates if cand.quadrant == qc]
    if len(selected) != 3:
        raise MethodDisagreementError(
            f"quadrant rule kept {len(selected)} of 4 candidates"
        )

    c_up = _nudge_up_hyperbola(c, PERTURB)
    moved = tangents_from_point(c_up, ctx)
    period = ctx.period

    def phase_shift(cand: TangencyCandidate) -> float:
        nearest = min(moved, key=lambda mc: abs(_wrap(mc.s - cand.s, period)))
        return _wrap(nearest.s - cand.s, period)

    if any(phase_shift(cand) <= 0.0 for cand in selected) or phase_shift(rejected[0]) >= 0.0:
        raise MethodDisagreementError(
            "forward-motion rule disagrees with the quadrant rule"
        )
    return selected


def tangent_hyperbola_intersections(x1: Vec2, v1: Vec2) -> list[Vec2]:
    """Intersections of the line x1 + lam v1 with cx^2 - cy^2 = 1."""
    a = v1.x * v1.x - v1.y * v1.y
    b = 2.0 * (x1.x * v1.x - x1.y * v1.y)
    cterm = x1.x * x1.x - x1.y * x1.y - 1.0
    if abs(a) < 1e-14:
        # Line parallel to an asymptote: single crossing.
        if abs(b) < 1e-14:
            raise NoIntersectionError("tangent line runs along an asymptote")
        lam = -cterm / b
        return [x1 + lam * v1]
    disc = b * b - 4.0 * a * cterm
    if disc < -DISC_TOL:
        raise NoIntersectionError("tangent line misses the hyperbola")
    if disc <= DISC_TOL:
        lam = -b / (2.0 * a)
        return [x1 + lam * v1]
    sq = math.sqrt(disc)
    return [x1 + ((-b + sq) / (2.0 * a)) * v1, x1 + ((-b - sq) / (2.0 * a)) * v1]


def complete_triple_from_point(
    x1_phase: float, ctx: EllipticContext
) -> tuple[tuple[Vec2, Vec2], ConcurrencyPoint]:
    """Recover the other two choreographic positions from one body's phase.

    The tangent line at x1 crosses the hyperbola in d1, d2; the concurrency
    point is the crossing in a different quadrant from x1 (cross-checked:
    it is the one that moves up when x1 moves forward by PERTURB).  The
    remaining two bodies are then read off the tangent construction at that
    point, ordered as (x2, x3) = phases (x1 + 4K/3, x1 - 4K/3).
    """
    x1 = position(x1_phase, ctx)
    v1 = velocity(x1_phase, ctx)
    if x1.norm() < EPS_AXIS:
        raise AxisAmbiguityError("phase maps to the origin")
    q1 = quadrant(x1)

    ds = tangent_hyperbola_intersections(x1, v1)
    if len(ds) < 2:
        raise NoIntersectionError("tangent line is tangent to the hyperbola")
    picked = [d for d in ds if quadrant(d) != q1]
    if len(picked) != 1:
        raise AxisAmbiguityError(
            f"quadrant rule is ambiguous for intersections {ds}"
        )
    d_sel = picked[0]
    d_rej = ds[0] if ds[1] is d_sel else ds[1]

    # Forward cross-check: nudge the phase and re-intersect.
    moved = tangent_hyperbola_intersections(
        position(x1_phase + PERTURB, ctx), velocity(x1_phase + PERTURB, ctx)
    )
    sel_moved = min(moved, key=lambda p: (p - d_sel).norm())
    rej_moved = min(moved, key=lambda p: (p - d_rej).norm())
    if not (sel_moved.y > d_sel.y and rej_moved.y < d_rej.y):
        raise MethodDisagreementError(
            "upward-motion rule disagrees with the quadrant rule"
        )

    candidates = tangents_from_point(d_sel, ctx)
    partners = select_choreographic(d_sel, candidates, ctx)
    period = ctx.period
    third = period / 3.0

    def by_offset(offset: float) -> TangencyCandidate:
        return min(partners, key=lambda cand: abs(_wrap(cand.s - (x1_phase + offset), period)))

    x2 = by_offset(third).point
    x3 = by_offset(-third).point

    lambdas = []
    for p, v in ((x1, v1), (position(x1_phase + third, ctx), velocity(x1_phase + third, ctx)),
                 (position(x1_phase - third, ctx), velocity(x1_phase - third, ctx))):
        lambdas.append((d_sel - p).dot(v) / v.norm_sq())
    return (x2, x3), ConcurrencyPoint(c=d_sel, lambdas=tuple(lambdas), finite=True)


def sweep_row(t: float, ctx: EllipticContext) -> dict:
    """One geometry-sweep record: c(t), lambdas, quadrants, hyperbola residual."""
    s = triple(t, ctx)
    cp = concurrency_point(s)
    quads = [_quadrant_or_zero(p) for p in s.positions]
    return {
        "t": t,
        "cx": cp.c.x,
        "cy": cp.c.y,
        "lambda1": cp.lambdas[0],
        "lambda2": cp.lambdas[1],
        "lambda3": cp.lambdas[2],
        "quadrant_c": _quadrant_or_zero(cp.c) if cp.finite else 0,
        "quadrant_1": quads[0],
        "quadrant_2": quads[1],
        "quadrant_3": quads[2],
        "hyperbola_residual": hyperbola_residual(cp.c) if cp.finite else math.nan,
        "finite": cp.finite,
    }
