"""Conserved quantities of the choreography and their residuals.

On the analytic orbit at the choreographic modulus, the triple conserves:

    center of mass            = 0
    angular momentum (z)      = 0
    moment of inertia         = sqrt(3)
    sum of squared speeds     = 3/4          (reported without the 1/2 factor)
    sum of squared curvatures = 9 sqrt(3)
    sum of squared distances  = 3 sqrt(3)
    product of squared dists  = 3 sqrt(3) / 2

and the single body satisfies the pointwise relations
rho^-2 = 9 |x|^2 and v^2 + (m - 1/2) x^2 = 1/2 (the latter at every modulus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elliptic import EllipticContext, make_context
from .orbit import TripleState, Vec2, acceleration, position, triple, velocity

SQRT3 = math.sqrt(3.0)

# Closed-form constants of the conserved quantities.
EXPECTED_MOMENT_OF_INERTIA = SQRT3
EXPECTED_KINETIC_SUM = 0.75
EXPECTED_CURVATURE_SQ_SUM = 9.0 * SQRT3
EXPECTED_SUM_SQ_DISTANCES = 3.0 * SQRT3
EXPECTED_PRODUCT_SQ_DISTANCES = 1.5 * SQRT3

DEGENERATE_SPEED = 1e-12


def center_of_mass(s: TripleState) -> Vec2:
    p1, p2, p3 = s.positions
    return p1 + p2 + p3


def moment_of_inertia(s: TripleState) -> float:
    return sum(p.norm_sq() for p in s.positions)


def angular_momentum(s: TripleState) -> float:
    """z-component of the total angular momentum (unit masses)."""
    return sum(b.pos.cross(b.vel) for b in s.bodies)


def kinetic_energy(s: TripleState) -> float:
    """Sum of squared speeds, without the conventional 1/2 factor."""
    return sum(v.norm_sq() for v in s.velocities)


def curvature(t: float, ctx: EllipticContext) -> float:
    """Inverse curvature radius rho^-1 = |v x a| / |v|^3 at phase t."""
    v = velocity(t, ctx)
    speed = v.norm()
    if speed < DEGENERATE_SPEED:
        raise ValueError(f"degenerate velocity |v|={speed!r} at t={t!r}")
    a = acceleration(t, ctx)
    return abs(v.cross(a)) / speed**3


def curvature_sq_sum(s: TripleState, ctx: EllipticContext) -> float:
    return sum(curvature(b.t, ctx) ** 2 for b in s.bodies)


def velocity_relation_residual(t: float, m: float, ctx: EllipticContext | None = None) -> float:
    """|v^2 + (m - 1/2) x^2 - 1/2| at modulus m; tiny at every modulus."""
    if ctx is None or ctx.m != m:
        ctx = make_context(m)
    x2 = position(t, ctx).norm_sq()
    v2 = velocity(t, ctx).norm_sq()
    return abs(v2 + (m - 0.5) * x2 - 0.5)


def _pair_sq_distances(s: TripleState) -> tuple[float, float, float]:
    p1, p2, p3 = s.positions
    return ((p1 - p2).norm_sq(), (p2 - p3).norm_sq(), (p3 - p1).norm_sq())


def sum_sq_distances(s: TripleState) -> float:
    return sum(_pair_sq_distances(s))


def product_sq_distances(s: TripleState) -> float:
    r12, r23, r31 = _pair_sq_distances(s)
    return r12 * r23 * r31


@dataclass(frozen=True)
class InvariantReport:
    """All conserved quantities at one time sample plus named residuals."""

    t: float
    center_of_mass: Vec2
    moment_of_inertia: float
    angular_momentum: float
    kinetic_energy: float
    curvature_sq_sum: float
    sum_sq_distances: float
    product_sq_distances: float
    residuals: dict[str, float]

    def as_flat_dict(self) -> dict[str, float]:
        """Flat JSON-ready mapping: observed values plus *_residual keys."""
        out = {
            "t": self.t,
            "center_of_mass_x": self.center_of_mass.x,
            "center_of_mass_y": self.center_of_mass.y,
            "moment_of_inertia": self.moment_of_inertia,
            "angular_momentum": self.angular_momentum,
            "kinetic_energy": self.kinetic_energy,
            "curvature_sq_sum": self.curvature_sq_sum,
            "sum_sq_distances": self.sum_sq_distances,
            "product_sq_distances": self.product_sq_distances,
        }
        for name, r in self.residuals.items():
            out[name + "_residual"] = r
        return out


def full_report(t: float, ctx: EllipticContext) -> InvariantReport:
    s = triple(t, ctx)
    com = center_of_mass(s)
    moi = moment_of_inertia(s)
    ang = angular_momentum(s)
    kin = kinetic_energy(s)
    csq = curvature_sq_sum(s, ctx)
    ssd = sum_sq_distances(s)
    psd = product_sq_distances(s)
    residuals = {
        "center_of_mass": com.norm(),
        "moment_of_inertia": abs(moi - EXPECTED_MOMENT_OF_INERTIA),
        "angular_momentum": abs(ang),
        "kinetic_energy": abs(kin - EXPECTED_KINETIC_SUM),
        "curvature_sq_sum": abs(csq - EXPECTED_CURVATURE_SQ_SUM),
        "sum_sq_distances": abs(ssd - EXPECTED_SUM_SQ_DISTANCES),
        "product_sq_distances": abs(psd - EXPECTED_PRODUCT_SQ_DISTANCES),
    }
    return InvariantReport(
        t=t,
        center_of_mass=com,
        moment_of_inertia=moi,
        angular_momentum=ang,
        kinetic_energy=kin,
        curvature_sq_sum=csq,
        sum_sq_distances=ssd,
        product_sq_distances=psd,
        residuals=residuals,
    )


__all__ = [
    "InvariantReport",
    "center_of_mass",
    "moment_of_inertia",
    "angular_momentum",
    "kinetic_energy",
    "curvature",
    "curvature_sq_sum",
    "velocity_relation_residual",
    "sum_sq_distances",
    "product_sq_distances",
    "full_report",
]
