"""Complex-plane certification of the machinery behind the choreography.

The orbit in complex form is x(t) = sn(t) / (1 - i cn(t)) (with conjugate
partner sn / (1 + i cn)), an elliptic function of degree 4 whose poles in the
fundamental cell -2K <= Re t < 2K, -2K' <= Im t < 2K' sit at

    +-a2, +-a3   with   a2 = K/3 + iK',  a3 = 5K/3 + iK'.

Everything this module checks is a consequence of pole/residue bookkeeping:
summed residues cancel in the three-phase sums, the difference
x^-(t + 4K/3) - x^-(t) has triple zeros whose series coefficients are known
in closed form, and the complex equation of motion follows from matching
principal parts.  All checks are numerical: residues and Laurent/Taylor
coefficients come from trapezoidal contour means on small circles (spectrally
accurate for analytic integrands), pole locations are confirmed by
argument-principle winding numbers and first moments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .elliptic import (
    CHOREO_M,
    Cplx,
    EllipticContext,
    PoleProximityError,
    sn_cn_dn,
    sn_cn_dn_complex,
)
from .invariants import angular_momentum
from .orbit import triple

SQRT3 = math.sqrt(3.0)
ROOT4_3 = 3.0**0.25

CONTOUR_RADIUS = 1e-2
CONTOUR_NODES = 256
COEFF_RADII = (1e-2, 5e-3)

# Eq-of-motion sum constant for 1/(1 - i cn): (3 + sqrt(3)) / 2.
CN_SUM_CONSTANT = (3.0 + SQRT3) / 2.0

# Closed-form modulus of the choreography, as fixed by the special value
# sn(K/3) = sqrt(3) - 1 through the duplication/shift identity.
SN_THIRD = SQRT3 - 1.0

# Leading Taylor coefficients of x^-(t + 4K/3) - x^-(t) at its triple zero.
TRIPLE_ZERO_C3 = ROOT4_3 / (4.0 * math.sqrt(2.0))
TRIPLE_ZERO_C5 = 3.0**0.75 / (32.0 * math.sqrt(2.0))
# Principal part of the reciprocal: 2a / h^3 - b / h.
PRINCIPAL_2A = 4.0 * math.sqrt(2.0) / ROOT4_3
PRINCIPAL_B = ROOT4_3 / math.sqrt(2.0)


class ContourCrossingError(ValueError):
    """Another pole lies too close to the requested integration contour."""


@dataclass(frozen=True)
class PoleSpec:
    """A pole inside the fundamental cell with its claimed local data."""

    location: Cplx
    order: int
    claimed_residue: Cplx | None = None
    claimed_leading: Cplx | None = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    claimed: Cplx
    observed: Cplx
    residual: float
    passed: bool


def _result(name: str, claimed, observed, tol: float) -> CheckResult:
    residual = abs(observed - claimed)
    return CheckResult(name=name, claimed=claimed, observed=observed,
                       residual=residual, passed=residual <= tol)


def alpha2(ctx: EllipticContext) -> Cplx:
    return complex(ctx.K / 3.0, ctx.Kprime)


def alpha3(ctx: EllipticContext) -> Cplx:
    return complex(5.0 * ctx.K / 3.0, ctx.Kprime)


def alpha1(ctx: EllipticContext) -> Cplx:
    return complex(-ctx.K, ctx.Kprime)


def x_plus(t: Cplx, ctx: EllipticContext) -> Cplx:
    s, c, _ = sn_cn_dn_complex(t, ctx)
    return s / (1.0 - 1j * c)


def x_minus(t: Cplx, ctx: EllipticContext) -> Cplx:
    s, c, _ = sn_cn_dn_complex(t, ctx)
    return s / (1.0 + 1j * c)


def one_over_one_minus_icn(t: Cplx, ctx: EllipticContext) -> Cplx:
    _, c, _ = sn_cn_dn_complex(t, ctx)
    return 1.0 / (1.0 - 1j * c)


def x_plus_d1(t: Cplx, ctx: EllipticContext) -> Cplx:
    """d x^+ / dt in closed form: dn (cn - i) / (1 - i cn)^2."""
    _, c, d = sn_cn_dn_complex(t, ctx)
    u = 1.0 - 1j * c
    return d * (c - 1j) / (u * u)


def x_plus_d2(t: Cplx, ctx: EllipticContext) -> Cplx:
    """d^2 x^+ / dt^2 in closed form."""
    s, c, d = sn_cn_dn_complex(t, ctx)
    u = 1.0 - 1j * c
    return -s * ((ctx.m * c * (c - 1j) + d * d) / (u * u)
                 + 2j * d * d * (c - 1j) / (u * u * u))


def delta_x_minus(t: Cplx, ctx: EllipticContext) -> Cplx:
    """x^-(t + 4K/3) - x^-(t)."""
    third = 4.0 * ctx.K / 3.0
    return x_minus(t + third, ctx) - x_minus(t, ctx)


_FUNCTIONS = {
    "x_plus": x_plus,
    "one_over_one_minus_icn": one_over_one_minus_icn,
}


def pole_table(ctx: EllipticContext) -> dict[str, list[PoleSpec]]:
    """Simple poles of x^+ and 1/(1 - i cn) with their claimed residues."""
    a2, a3 = alpha2(ctx), alpha3(ctx)
    rt = math.sqrt(2.0) / ROOT4_3
    ri = 1.0 / ROOT4_3
    return {
        "x_plus": [
            PoleSpec(a2, 1, claimed_residue=rt),
            PoleSpec(a3, 1, claimed_residue=-rt),
            PoleSpec(-a2, 1, claimed_residue=rt),
            PoleSpec(-a3, 1, claimed_residue=-rt),
        ],
        "one_over_one_minus_icn": [
            PoleSpec(a2, 1, claimed_residue=ri),
            PoleSpec(a3, 1, claimed_residue=-ri),
            PoleSpec(-a2, 1, claimed_residue=-ri),
            PoleSpec(-a3, 1, claimed_residue=ri),
        ],
    }


def _all_pole_locations(ctx: EllipticContext) -> list[Cplx]:
    a2, a3 = alpha2(ctx), alpha3(ctx)
    return [a2, a3, -a2, -a3]


def _contour_mean(f, center: Cplx, radius: float, weight_k: int,
                  nodes: int = CONTOUR_NODES) -> Cplx:
    # (1/N) sum f(center + r e^{i th}) e^{-i k th}; equals the Laurent
    # coefficient c_k times r^k for f analytic in a punctured neighborhood.
    acc = 0j
    for j in range(nodes):
        th = 2.0 * math.pi * j / nodes
        z = cmath.rect(radius, th)
        acc += f(center + z) * cmath.exp(complex(0.0, -weight_k * th))
    return acc / nodes


def residue_at(pole: PoleSpec, f: str, ctx: EllipticContext,
               radius: float = CONTOUR_RADIUS) -> Cplx:
    """Residue of the named function at a simple pole by contour quadrature.

    Computes (1/2 pi i) of the circular contour integral as the mean of
    f(z) (z - pole) over the circle.  Refuses contours within 2*radius of a
    different pole of the same function.
    """
    if f not in _FUNCTIONS:
        raise ValueError(f"unknown function id {f!r}; expected one of {sorted(_FUNCTIONS)}")
    if pole.order != 1:
        raise ValueError("residue_at handles simple poles only")
    for other in _all_pole_locations(ctx):
        d = abs(other - pole.location)
        if 1e-9 < d < 2.0 * radius:
            raise ContourCrossingError(
                f"pole at {other} lies within 2x contour radius of {pole.location}"
            )
    func = _FUNCTIONS[f]
    return _contour_mean(lambda z: func(z, ctx), pole.location, radius, weight_k=-1) * radius


def check_special_values(ctx: EllipticContext, tol: float = 1e-12) -> list[CheckResult]:
    """The twelve closed-form values of sn, cn, dn at multiples of K/3."""
    rt2 = math.sqrt(2.0)
    table = {
        1: (SQRT3 - 1.0, ROOT4_3 * (SQRT3 - 1.0) / rt2, 1.0 / rt2),
        2: (ROOT4_3 * (SQRT3 - 1.0), 2.0 - SQRT3, (SQRT3 - 1.0) / 2.0),
        4: (ROOT4_3 * (SQRT3 - 1.0), -2.0 + SQRT3, (SQRT3 - 1.0) / 2.0),
        5: (SQRT3 - 1.0, -ROOT4_3 * (SQRT3 - 1.0) / rt2, 1.0 / rt2),
    }
    out = []
    for j, claimed in table.items():
        s, c, d = sn_cn_dn_complex(complex(j * ctx.K / 3.0, 0.0), ctx)
        for name, got, want in (("sn", s, claimed[0]), ("cn", c, claimed[1]), ("dn", d, claimed[2])):
            out.append(_result(f"{name}({j}K/3)", want, got, tol))
    return out


def check_modulus_identity(ctx: EllipticContext, tol: float = 1e-12) -> list[CheckResult]:
    """The special value sn(K/3) pins the modulus.

    With s = sn(K/3), evaluating sn(10K/3) by the 3K-shift and by the
    4K - 2K/3 duplication forces (1 - 2s) / (s^4 - 2s^3) to equal the squared
    modulus; at the choreographic s = sqrt(3) - 1 that value is (2+sqrt3)/4.
    The reported residual is the distance of the rebuilt value from the
    choreographic modulus, so it doubles as a negative control at other
    moduli.
    """
    s, c, d = sn_cn_dn(ctx.K / 3.0, ctx)
    rebuilt = (1.0 - 2.0 * s) / (s**4 - 2.0 * s**3)
    shift = -c / d
    duplication = -2.0 * s * c * d / (1.0 - ctx.m * s**4)
    direct = sn_cn_dn(10.0 * ctx.K / 3.0, ctx)[0]
    return [
        _result("modulus from sn(K/3)", CHOREO_M, rebuilt, tol),
        _result("sn(10K/3) shift vs duplication", shift, duplication, tol),
        _result("sn(10K/3) shift vs direct", shift, direct, tol),
    ]


def _three_phase_sum(f, t: Cplx, ctx: EllipticContext) -> Cplx:
    third = 4.0 * ctx.K / 3.0
    return f(t, ctx) + f(t + third, ctx) + f(t - third, ctx)


def check_sum_identities(t: Cplx, ctx: EllipticContext,
                         tol_real: float = 1e-11, tol_complex: float = 1e-9) -> list[CheckResult]:
    """Three-phase sums: x^+ cancels to 0, 1/(1 - i cn) to (3 + sqrt3)/2."""
    t = complex(t)
    tol = tol_real if t.imag == 0.0 else tol_complex
    return [
        _result("three-phase sum of x_plus", 0.0, _three_phase_sum(x_plus, t, ctx), tol),
        _result("three-phase sum of 1/(1-i cn)", CN_SUM_CONSTANT,
                _three_phase_sum(one_over_one_minus_icn, t, ctx), tol),
    ]


def j_plus_product(t: Cplx, ctx: EllipticContext) -> Cplx:
    """j(t) = x^-(t) * dx^+/dt; real part is (1/2) d|x|^2/dt, imaginary part
    the single-body angular momentum."""
    return x_minus(t, ctx) * x_plus_d1(t, ctx)


def j_plus_derivative(t: Cplx, ctx: EllipticContext) -> Cplx:
    """Same quantity as d/dt [1/(1 - i cn)] = -i sn dn / (1 - i cn)^2."""
    s, c, d = sn_cn_dn_complex(t, ctx)
    u = 1.0 - 1j * c
    return -1j * s * d / (u * u)


def check_j_identity(t: Cplx, ctx: EllipticContext, tol: float = 1e-10) -> list[CheckResult]:
    """Both representations of j agree and the three-phase sum vanishes.

    On the real axis the vanishing sum is the simultaneous conservation of
    the moment of inertia (real part) and angular momentum (imaginary part).
    """
    t = complex(t)
    out = [
        _result("j product form vs derivative form",
                j_plus_derivative(t, ctx), j_plus_product(t, ctx), tol),
        _result("three-phase sum of j", 0.0, _three_phase_sum(j_plus_product, t, ctx), tol),
    ]
    if t.imag == 0.0:
        s = _three_phase_sum(j_plus_product, t, ctx)
        ang = angular_momentum(triple(t.real, ctx))
        out.append(_result("Im(j sum) vs angular momentum", ang, s.imag, 1e-11))
    return out


def taylor_coefficient(f, center: Cplx, k: int, ctx: EllipticContext,
                       radii: tuple[float, float] = COEFF_RADII) -> Cplx:
    """k-th Laurent/Taylor coefficient of f at center via Cauchy means.

    Evaluated on circles of two radii and averaged; with uniformly spaced
    nodes the harmonic projection already annihilates every other series
    term below the aliasing order, so the second radius serves as an
    agreement check rather than an extrapolation basis.
    """
    vals = [_contour_mean(lambda z: f(z, ctx), center, r, weight_k=k) / r**k
            for r in radii]
    return sum(vals) / len(vals)


def check_triple_zero_and_pole(t0: Cplx, ctx: EllipticContext) -> list[CheckResult]:
    """Local structure of delta x^- at one of its triple zeros.

    Checks: log-log slope 3 of |delta x^-| on shrinking circles, the leading
    and next Taylor coefficients, oddness around the zero, and the principal
    part (2a / h^3 - b / h, up to the sign of the mirror zero) of the
    reciprocal.
    """
    t0 = complex(t0)
    a2, a3 = alpha2(ctx), alpha3(ctx)
    if abs(t0 - a2) < 1e-9:
        sign = 1.0
    elif abs(t0 + a3) < 1e-9:
        sign = -1.0
    else:
        raise ValueError(f"t0 must be one of the triple zeros {a2} or {-a3}")

    # Order of the zero by log-log fit over two decades of circle radii.
    n_h = 9
    logs_h, logs_v = [], []
    for i in range(n_h):
        h = 1e-4 * (100.0 ** (i / (n_h - 1)))
        v = abs(delta_x_minus(t0 + h * cmath.exp(0.7j), ctx))
        logs_h.append(math.log(h))
        logs_v.append(math.log(v))
    mh = sum(logs_h) / n_h
    mv = sum(logs_v) / n_h
    slope = sum((a - mh) * (b - mv) for a, b in zip(logs_h, logs_v)) / sum(
        (a - mh) ** 2 for a in logs_h
    )

    c3 = taylor_coefficient(delta_x_minus, t0, 3, ctx)
    c5 = taylor_coefficient(delta_x_minus, t0, 5, ctx)
    inv = lambda z, ctx_: 1.0 / delta_x_minus(z, ctx_)
    p3 = taylor_coefficient(inv, t0, -3, ctx)
    p1 = taylor_coefficient(inv, t0, -1, ctx)

    h = complex(0.3, 0.2)
    odd = delta_x_minus(t0 + h, ctx) + delta_x_minus(t0 - h, ctx)

    return [
        _result("zero order (log-log slope)", 3.0, slope, 0.01),
        _result("leading coefficient h^3", sign * TRIPLE_ZERO_C3, c3, 1e-5),
        _result("next coefficient h^5", sign * TRIPLE_ZERO_C5, c5, 1e-4),
        _result("principal part h^-3 of reciprocal", sign * PRINCIPAL_2A, p3, 1e-5),
        # The 1/h coefficient rides on top of the cancelled 1/h^3 term, which
        # costs three orders of floating-point headroom at the smaller radius.
        _result("principal part h^-1 of reciprocal", -sign * PRINCIPAL_B, p1, 1e-4),
        _result("oddness around the zero", 0.0, odd, 1e-10),
    ]


def eom_complex_residual(t: Cplx, ctx: EllipticContext) -> float:
    """|d^2 x^+/dt^2 - (1/2)(1/dx^-(t) - 1/dx^-(t - 4K/3)) - (sqrt3/4) x^+|."""
    third = 4.0 * ctx.K / 3.0
    rhs = 0.5 * (1.0 / delta_x_minus(t, ctx) - 1.0 / delta_x_minus(t - third, ctx))
    rhs += SQRT3 / 4.0 * x_plus(t, ctx)
    return abs(x_plus_d2(t, ctx) - rhs)


def check_eom_pole_cancellation(samples: list[Cplx], ctx: EllipticContext,
                                tol: float = 1e-8) -> list[CheckResult]:
    """The complex equation of motion at points away from all poles."""
    return [
        _result(f"complex equation of motion at t={complex(t)}", 0.0,
                eom_complex_residual(complex(t), ctx), tol)
        for t in samples
    ]


def locate_pole(f, approx: Cplx, ctx: EllipticContext, f_d1=None,
                radius: float = 5e-2) -> tuple[int, Cplx]:
    """(winding number, refined location) of an isolated pole/zero of f.

    Winding of f around a circle is Z - P by the argument principle; the
    first moment of f'/f recovers the location.  f' is taken numerically
    unless a closed form is supplied.
    """
    if f_d1 is None:
        eps = 1e-6
        f_d1 = lambda z, c: (f(z + eps, c) - f(z - eps, c)) / (2.0 * eps)
    n = CONTOUR_NODES
    wind = 0j
    moment = 0j
    for j in range(n):
        th = 2.0 * math.pi * j / n
        z = cmath.rect(radius, th)
        t = approx + z
        ratio = f_d1(t, ctx) / f(t, ctx)
        wind += ratio * z
        moment += t * ratio * z
    wind /= n
    moment /= n
    order = round(wind.real)
    if order == 0:
        raise ValueError(f"no zero or pole detected near {approx}")
    return order, moment / wind


def pole_census(ctx: EllipticContext, grid: int = 128,
                blowup: float = 8.0) -> list[tuple[Cplx, int, Cplx]]:
    """Census of the poles of x^+ inside the fundamental cell.

    Scans |x^+| on a grid (skipping the removable 0/0 points of the sn/cn
    machinery), clusters the blowup loci, and for each cluster returns
    (refined location, winding number, cluster seed).  Exactly four loci are
    expected, at +-a2 and +-a3.
    """
    K, Kp = ctx.K, ctx.Kprime
    hits: list[Cplx] = []
    for ix in range(grid):
        for iy in range(grid):
            t = complex(-2.0 * K + (ix + 0.5) * 4.0 * K / grid,
                        -2.0 * Kp + (iy + 0.5) * 4.0 * Kp / grid)
            try:
                v = abs(x_plus(t, ctx))
            except PoleProximityError:
                continue
            if v > blowup:
                hits.append(t)
    clusters: list[list[Cplx]] = []
    for h in hits:
        for cl in clusters:
            if abs(h - cl[0]) < 0.5:
                cl.append(h)
                break
        else:
            clusters.append([h])
    out = []
    for cl in clusters:
        seed = sum(cl) / len(cl)
        order, loc = locate_pole(x_plus, seed, ctx, f_d1=x_plus_d1)
        out.append((loc, order, seed))
    return out


def delta_x_minus_simple_poles(ctx: EllipticContext) -> list[tuple[Cplx, int]]:
    """Winding check at the six claimed simple poles of delta x^-.

    They sit at the conjugates +-a1*, +-a2*, +-a3*; each winding number must
    come back -1.
    """
    locs = [alpha1(ctx).conjugate(), alpha2(ctx).conjugate(), alpha3(ctx).conjugate()]
    locs += [-p for p in locs]
    out = []
    for p in locs:
        order, refined = locate_pole(delta_x_minus, p, ctx, radius=2e-2)
        out.append((refined, order))
    return out
