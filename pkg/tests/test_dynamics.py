import math
import random

import pytest

from lemnichor.dynamics import (
    CollisionError,
    PotentialVariant,
    eom_residual,
    force_newton,
    force_repulsive1,
    force_repulsive2,
    force_total,
    integrate,
    integrate_choreography,
    one_body_lemniscate_residual,
    one_body_state,
    potential,
    total_energy,
)
from lemnichor.elliptic import make_context
from lemnichor.orbit import Vec2, acceleration, position, triple, triple_phases, velocity

from conftest import SQRT3

U = PotentialVariant.U_CENTRAL
V = PotentialVariant.V_PAIRWISE


def random_triple(rng, min_sep=0.15):
    while True:
        ps = [Vec2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)) for _ in range(3)]
        seps = [(ps[i] - ps[j]).norm() for i in range(3) for j in range(i + 1, 3)]
        if min(seps) > min_sep:
            return ps


class TestForces:
    def test_newton_equilateral_points_inward(self):
        pts = [
            Vec2(math.cos(a), math.sin(a))
            for a in (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
        ]
        for i, p in enumerate(pts):
            f = force_newton(pts, i)
            # force is antiparallel to the position vector by symmetry
            assert f.cross(p) == pytest.approx(0.0, abs=1e-14)
            assert f.dot(p) < 0.0

    def test_newton_cancels_for_body_at_origin(self, ctx):
        s = triple(0.0, ctx)
        assert force_newton(s.positions, 0).norm() <= 1e-13

    def test_newton_matches_rearranged_equation_of_motion(self, ctx):
        s = triple(0.0, ctx)
        f = force_newton(s.positions, 1)
        want = acceleration(4.0 * ctx.K / 3.0, ctx) - force_repulsive1(s.positions[1])
        assert (f - want).norm() <= 1e-10

    def test_newton_collision_error(self):
        pts = [Vec2(0.0, 0.0), Vec2(1e-11, 0.0), Vec2(1.0, 1.0)]
        with pytest.raises(CollisionError):
            force_newton(pts, 0)

    def test_repulsive1_values(self):
        assert force_repulsive1(Vec2(0.0, 0.0)) == Vec2(0.0, 0.0)
        f = force_repulsive1(Vec2(1.0, 0.0))
        assert f.x == pytest.approx(SQRT3 / 4.0, abs=0.0)
        assert f.y == 0.0

    def test_repulsive1_linearity(self):
        x = Vec2(0.3, -0.8)
        doubled = force_repulsive1(2.0 * x)
        single = force_repulsive1(x)
        assert doubled.x == 2.0 * single.x
        assert doubled.y == 2.0 * single.y

    def test_repulsive2_equals_repulsive1_when_centered(self):
        rng = random.Random(42)
        for _ in range(50):
            p1 = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1))
            p2 = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1))
            pts = [p1, p2, -1.0 * (p1 + p2)]
            for i in range(3):
                d = force_repulsive2(pts, i) - force_repulsive1(pts[i])
                assert d.norm() <= 1e-13

    def test_repulsive2_offset_by_center_of_mass(self):
        rng = random.Random(43)
        shift = Vec2(0.4, -0.2)
        pts = [p + shift for p in random_triple(rng)]
        com = (1.0 / 3.0) * (pts[0] + pts[1] + pts[2])
        for i in range(3):
            d = force_repulsive1(pts[i]) - force_repulsive2(pts, i)
            want = (SQRT3 / 4.0) * com
            assert (d - want).norm() <= 1e-13

    def test_repulsive2_zero_for_body_between_antipodes(self, ctx):
        s = triple(0.0, ctx)
        assert force_repulsive2(s.positions, 0).norm() <= 1e-13


class TestPotential:
    def test_value_on_initial_triple(self, ctx):
        # Pairwise term is ln of the distance product over 4; the central term
        # is -(sqrt3/8) * moment of inertia = -3/8.
        want = 0.25 * math.log(1.5 * SQRT3) - 0.375
        s = triple(0.0, ctx)
        assert potential(s.positions, U) == pytest.approx(want, abs=1e-13)
        assert potential(s.positions, V) == pytest.approx(want, abs=1e-13)

    def test_unit_equilateral_pairwise_log_term_vanishes(self):
        r = 1.0 / math.sqrt(3.0)  # circumradius for unit side
        pts = [
            Vec2(r * math.cos(a), r * math.sin(a))
            for a in (0.5, 0.5 + 2.0 * math.pi / 3.0, 0.5 + 4.0 * math.pi / 3.0)
        ]
        want = -(SQRT3 / 8.0) * sum(p.norm_sq() for p in pts)
        assert potential(pts, U) == pytest.approx(want, abs=1e-13)

    def test_collision_error(self):
        pts = [Vec2(0.0, 0.0), Vec2(5e-11, 0.0), Vec2(1.0, 0.0)]
        with pytest.raises(CollisionError):
            potential(pts, U)

    @pytest.mark.parametrize("variant", [U, V])
    def test_force_is_negative_gradient(self, variant):
        rng = random.Random(7)
        h = 1e-6
        for _ in range(20):
            pts = random_triple(rng)
            for i in range(3):
                f = force_total(pts, i, variant)
                for axis in range(2):
                    bump = Vec2(h, 0.0) if axis == 0 else Vec2(0.0, h)
                    up = list(pts)
                    dn = list(pts)
                    up[i] = pts[i] + bump
                    dn[i] = pts[i] - bump
                    grad = (potential(up, variant) - potential(dn, variant)) / (2 * h)
                    got = f.x if axis == 0 else f.y
                    assert got == pytest.approx(-grad, abs=1e-7)


class TestEquationOfMotion:
    @pytest.mark.parametrize("variant", [U, V])
    @pytest.mark.parametrize("frac", [1.0 / 6.0, 2.0 / 3.0])
    def test_residual_on_orbit(self, ctx, variant, frac):
        assert eom_residual(frac * ctx.K, variant, ctx) < 1e-9

    def test_wrong_modulus_negative_control(self):
        bad = make_context(0.5)
        assert eom_residual(bad.K / 6.0, U, bad) > 1e-2

    def test_variants_identical_on_orbit(self, ctx, period):
        for i in range(100):
            t = i * period / 100.0
            d = abs(eom_residual(t, U, ctx) - eom_residual(t, V, ctx))
            assert d < 1e-12


class TestTotalEnergy:
    def test_initial_value(self, ctx):
        s = triple(0.0, ctx)
        want = 0.375 + 0.25 * math.log(1.5 * SQRT3) - 0.375
        assert total_energy(s.positions, s.velocities, U) == pytest.approx(want, abs=1e-13)

    @pytest.mark.parametrize("variant", [U, V])
    def test_constant_along_orbit(self, ctx, period, variant):
        vals = []
        for i in range(1000):
            s = triple(i * period / 1000.0, ctx)
            vals.append(total_energy(s.positions, s.velocities, variant))
        assert max(vals) - min(vals) < 1e-9


class TestIntegrate:
    def test_argument_validation(self, ctx):
        s = triple(0.0, ctx)
        with pytest.raises(ValueError):
            integrate(s.positions, s.velocities, U, dt=-0.1, n_steps=10)
        with pytest.raises(ValueError):
            integrate(s.positions, s.velocities, U, dt=0.1, n_steps=0)

    def test_collision_abort_keeps_partial_trajectory(self):
        pts = [Vec2(-1e-10, 0.0), Vec2(1e-10, 0.0), Vec2(1.0, 1.0)]
        vels = [Vec2(0.95, 0.0), Vec2(-0.95, 0.0), Vec2(0.0, 0.0)]
        with pytest.raises(CollisionError) as err:
            integrate(pts, vels, V, dt=1e-10, n_steps=10)
        assert err.value.step_index is not None
        assert err.value.partial is not None
        assert len(err.value.partial.points) >= 1

    def test_order_two_position_convergence(self, ctx, period):
        errs = []
        for n in (2**12, 2**13):
            traj = integrate_choreography(ctx, V, period / n, n, record_every=n)
            ref = triple(period, ctx)
            errs.append(
                max((p - q).norm() for p, q in zip(traj.final.positions, ref.positions))
            )
        assert 3.0 < errs[0] / errs[1] < 5.0

    def test_energy_drift_order_two(self, ctx, period):
        drifts = []
        for n in (2**12, 2**13):
            traj = integrate_choreography(ctx, U, period / n, n, record_every=n)
            drifts.append(traj.energy_drift)
        assert 3.0 < drifts[0] / drifts[1] < 5.0

    def test_pairwise_variant_conserves_center_of_mass(self, ctx, period):
        n = 2**12
        traj = integrate_choreography(ctx, V, period / n, n, record_every=n)
        com = traj.final.positions[0] + traj.final.positions[1] + traj.final.positions[2]
        assert com.norm() < 1e-11

    def test_central_variant_translated_ic_drifts(self, ctx, period):
        shift = Vec2(0.1, 0.05)
        phases = triple_phases(0.0, ctx)
        pts = [position(p, ctx) + shift for p in phases]
        vels = [velocity(p, ctx) for p in phases]
        n = 2**12
        traj = integrate(pts, vels, U, period / n, n, record_every=n)
        com = (1.0 / 3.0) * (
            traj.final.positions[0] + traj.final.positions[1] + traj.final.positions[2]
        )
        assert (com - shift).norm() > 1e-3

    def test_angular_momentum_conserved(self, ctx, period):
        n = 2**12
        for variant in (U, V):
            traj = integrate_choreography(ctx, variant, period / n, n, record_every=64)
            l_vals = [
                sum(p.cross(v) for p, v in zip(pt.positions, pt.velocities))
                for pt in traj.points
            ]
            assert max(abs(l) for l in l_vals) < 1e-12

    def test_recorded_samples_uniform(self, ctx, period):
        traj = integrate_choreography(ctx, V, 0.01, 32)
        ts = [pt.t for pt in traj.points]
        assert ts == pytest.approx([0.01 * i for i in range(33)], abs=1e-12)


class TestOneBody:
    def test_residual_small_inside_domain(self):
        for i in range(50):
            t = -0.9 + 1.8 * i / 49.0
            assert one_body_lemniscate_residual(0.5, t) < 1e-8

    def test_specific_samples(self):
        assert one_body_lemniscate_residual(0.5, 0.0) < 1e-8
        assert one_body_lemniscate_residual(0.5, 0.4) < 1e-8

    def test_angular_momentum_equals_l(self):
        for l in (0.5, 0.2):
            for t in (-0.3, 0.0, 0.45):
                if abs(2 * l * t) >= 1.0:
                    continue
                pos, vel, _ = one_body_state(l, t)
                assert pos.cross(vel) == pytest.approx(l, abs=1e-13)

    def test_starts_on_lemniscate_apex(self):
        pos, _, _ = one_body_state(0.5, 0.0)
        assert pos == Vec2(1.0, 0.0)

    def test_collision_neighborhood_raises(self):
        with pytest.raises(ValueError):
            one_body_lemniscate_residual(0.5, 1.0)
        with pytest.raises(ValueError):
            one_body_state(0.5, -0.9999999)
