"""The analytic orbit on the lemniscate and the three-body configuration.

The single-body orbit is

    x(t) = sn(t) / (1 + cn^2(t)),    y(t) = sn(t) cn(t) / (1 + cn^2(t)),

which traces the Bernoulli lemniscate (x^2 + y^2)^2 = x^2 - y^2 with period
4K.  Velocity and acceleration are closed forms obtained by differentiating
with sn' = cn dn, cn' = -sn dn, dn' = -m sn cn; the equation-of-motion checks
need more accuracy than finite differences can provide.

The choreography places three unit-mass bodies at phases t, t + 4K/3 and
t - 4K/3 of the same orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elliptic import EllipticContext, sn_cn_dn


@dataclass(frozen=True)
class Vec2:
    """Plane vector."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, a: float) -> "Vec2":
        return Vec2(a * self.x, a * self.y)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        """z-component of the planar cross product."""
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class BodyState:
    """Position, velocity and acceleration of one body at phase t."""

    pos: Vec2
    vel: Vec2
    acc: Vec2
    t: float


@dataclass(frozen=True)
class TripleState:
    """The three choreographic bodies at a common time.

    bodies are ordered by phase (t, t + 4K/3, t - 4K/3); downstream body
    indices always refer to this order.
    """

    bodies: tuple[BodyState, BodyState, BodyState]
    t: float

    @property
    def positions(self) -> tuple[Vec2, Vec2, Vec2]:
        return tuple(b.pos for b in self.bodies)

    @property
    def velocities(self) -> tuple[Vec2, Vec2, Vec2]:
        return tuple(b.vel for b in self.bodies)


def lemniscate_residual(p: Vec2) -> float:
    """(x^2 + y^2)^2 - (x^2 - y^2); zero exactly on the curve."""
    r2 = p.norm_sq()
    return r2 * r2 - (p.x * p.x - p.y * p.y)


def _derivs(s: float, c: float, d: float, m: float):
    # First and second derivatives of (x, y) as rational functions of
    # (sn, cn, dn); see module docstring for the differentiation rules.
    cc = c * c
    dd = d * d
    one = 1.0 + cc
    one2 = one * one
    one3 = one2 * one
    vx = c * d * (3.0 - cc) / one2
    vy = d * (3.0 * cc - 1.0) / one2
    ax = s * (
        (-(dd + m * cc) * (3.0 - cc) + 2.0 * cc * dd) / one2
        + 4.0 * cc * dd * (3.0 - cc) / one3
    )
    ay = (
        (-m * s * c * (3.0 * cc - 1.0) - 6.0 * s * c * dd) / one2
        + 4.0 * s * c * dd * (3.0 * cc - 1.0) / one3
    )
    return vx, vy, ax, ay


def position(t: float, ctx: EllipticContext) -> Vec2:
    s, c, _ = sn_cn_dn(t, ctx)
    den = 1.0 + c * c
    return Vec2(s / den, s * c / den)


def velocity(t: float, ctx: EllipticContext) -> Vec2:
    s, c, d = sn_cn_dn(t, ctx)
    vx, vy, _, _ = _derivs(s, c, d, ctx.m)
    return Vec2(vx, vy)


def acceleration(t: float, ctx: EllipticContext) -> Vec2:
    s, c, d = sn_cn_dn(t, ctx)
    _, _, ax, ay = _derivs(s, c, d, ctx.m)
    return Vec2(ax, ay)


def body_state(t: float, ctx: EllipticContext) -> BodyState:
    """Full state at phase t from a single elliptic evaluation."""
    s, c, d = sn_cn_dn(t, ctx)
    den = 1.0 + c * c
    vx, vy, ax, ay = _derivs(s, c, d, ctx.m)
    return BodyState(
        pos=Vec2(s / den, s * c / den),
        vel=Vec2(vx, vy),
        acc=Vec2(ax, ay),
        t=t,
    )


def triple_phases(t: float, ctx: EllipticContext) -> tuple[float, float, float]:
    third = 4.0 * ctx.K / 3.0
    return (t, t + third, t - third)


def triple(t: float, ctx: EllipticContext) -> TripleState:
    """The three choreographic bodies at time t."""
    b = tuple(body_state(p, ctx) for p in triple_phases(t, ctx))
    return TripleState(bodies=b, t=t)
