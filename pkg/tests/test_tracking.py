"""Engine tests: discretization, scheduling, resolution maps, invariants."""

import math

import pytest

from pfront.config import MODE_EXACT, MODE_PAPER, SimConfig
from pfront.errors import VacuumFormation
from pfront.riemann import GasState, WaveFamily, shock_curve, solve_riemann
from pfront.tracking import (
    COMPRESSION,
    RAREFACTION,
    SHOCK,
    ConstantPair,
    ExactSpeeds,
    ExplicitFront,
    Front,
    Scheduled,
    SimState,
    discretize_profile,
    next_event,
    resolve_event,
    run,
    total_variation,
)

ONE, TWO = WaveFamily.ONE, WaveFamily.TWO


def make_sim(fronts, leftmost, policy=None, **cfg):
    config = SimConfig(**cfg)
    return SimState(fronts, leftmost, config, policy or ConstantPair(1.0))


def line_front(fid, family, x, left, shift, tag=""):
    """Helper: rarefaction-curve front from `left` with (u,rho) shift."""
    du = shift if family is TWO else -shift
    right = GasState(left.u + du, left.rho + shift)
    raw = (right.w1 - left.w1) if family is ONE else (right.w2 - left.w2)
    compressive = raw > 0 if family is ONE else raw < 0
    kind = COMPRESSION if compressive else RAREFACTION
    return Front(fid, family, kind, x, 0.0, left, right, tag)


class TestDiscretize:
    def test_constant_profile(self):
        cfg = SimConfig()
        sim = discretize_profile([0, 1, 2], [1, 1, 1], [1, 1, 1], [],
                                 cfg, ConstantPair(1.0))
        assert len(sim.fronts) == 0

    def test_splitting_rule(self):
        cfg = SimConfig(delta_r=0.1)
        # single w2 jump of 0.3 along the rarefaction direction
        sim = discretize_profile([0, 1], [1, 1], [1.0, 1.3], [],
                                 cfg, ConstantPair(1.0))
        assert len(sim.fronts) == 3
        for f in sim.fronts:
            assert f.kind == RAREFACTION
            assert f.strength == pytest.approx(0.1, rel=1e-12)

    def test_explicit_shock(self):
        cfg = SimConfig()
        sim = discretize_profile([0, 1], [1, 1], [1, 1],
                                 [ExplicitFront(0.5, ONE, SHOCK, 1.0)],
                                 cfg, ConstantPair(1.0))
        (f,) = sim.fronts
        assert f.kind == SHOCK and f.family is ONE
        assert f.raw == pytest.approx(1.0, rel=1e-12)
        # right state on the admissible curve
        expect = shock_curve(f.left, ONE, "left", f.right.rho)
        assert f.right.u == pytest.approx(expect.u, abs=1e-12)

    def test_chaining_and_tv(self):
        cfg = SimConfig(delta_r=0.05)
        sim = discretize_profile([0, 0.5, 1.0], [1, 1.2, 0.9], [2, 2, 2], [],
                                 cfg, ConstantPair(1.0))
        sim.verify_chain()
        tv1, tv2 = total_variation(sim)
        assert tv1 == pytest.approx(0.2 + 0.3, rel=1e-12)
        assert tv2 == pytest.approx(0.0, abs=1e-13)


class TestNextEvent:
    def test_kinematics(self):
        left = GasState(0.0, 1.0)
        m = GasState(0.1, 1.1)
        right = GasState(0.0, 1.2)
        f2 = line_front(0, TWO, 0.0, left, 0.1)
        f1 = Front(1, ONE, SHOCK, 1.0, 0.0, f2.right,
                   shock_curve(f2.right, ONE, "left", 1.3), "")
        sim = make_sim([f2, f1], left)
        ev = next_event(sim)
        assert ev.t == pytest.approx(0.5)
        assert ev.x == pytest.approx(0.5)
        assert ev.indices == [0, 1]

    def test_parallel_no_event(self):
        left = GasState(0.0, 1.0)
        a = line_front(0, TWO, 0.0, left, 0.05)
        b = line_front(1, TWO, 1.0, a.right, 0.05)
        sim = make_sim([a, b], left)
        assert next_event(sim) is None

    def test_three_way_collision(self):
        left = GasState(0.0, 2.0)
        a = line_front(0, TWO, -1.0, left, 0.05)
        b = line_front(1, TWO, 0.0, a.right, -0.05)   # compression, same family
        c = line_front(2, ONE, 1.0, b.right, 0.05)
        pol = Scheduled(default_fn=lambda f, s: {0: 2.0, 1: 1.0, 2: -1.0}[f.id])
        sim = make_sim([a, b, c], left, policy=pol)
        ev = next_event(sim)
        # all three meet at x=1? a catches b at t=1 x=1; b meets c at t=0.5...
        # actual: b and c meet first; this test only needs a well-formed event
        assert ev is not None
        assert len(ev.indices) >= 2

    def test_simultaneous_three_fronts_same_point(self):
        left = GasState(0.0, 2.0)
        a = line_front(0, TWO, -2.0, left, 0.05)
        b = line_front(1, TWO, -1.5, a.right, -0.05)
        c = line_front(2, ONE, 1.0, b.right, 0.05)
        pol = Scheduled(default_fn=lambda f, s: {0: 2.0, 1: 1.5, 2: -1.0}[f.id])
        sim = make_sim([a, b, c], left, policy=pol)
        ev = next_event(sim)
        assert ev.t == pytest.approx(1.0)
        assert ev.x == pytest.approx(0.0, abs=1e-12)
        assert ev.indices == [0, 1, 2]


class TestResolvePaper:
    def test_translation_crossing_exact(self):
        left = GasState(0.0, 2.0)
        f2 = line_front(0, TWO, 0.0, left, 0.03)
        f1 = line_front(1, ONE, 1.0, f2.right, -0.02)
        sim = make_sim([f2, f1], left)
        ev = next_event(sim)
        out = resolve_event(sim, ev)
        assert [f.family for f in out] == [ONE, TWO]
        assert out[0].raw == pytest.approx(f1.raw, abs=1e-15)
        assert out[1].raw == pytest.approx(f2.raw, abs=1e-15)

    def test_no_footprint_pair(self):
        # rarefaction+compression pair crossing a shock leaves it unchanged
        left = GasState(0.0, 1.0)
        r = line_front(0, TWO, 0.0, left, 0.01)
        c = line_front(1, TWO, 0.2, r.right, -0.01)
        s_left = c.right
        s_right = shock_curve(s_left, ONE, "left", 1.5)
        s = Front(2, ONE, SHOCK, 1.0, 0.0, s_left, s_right, "")
        sim = make_sim([r, c, s], left)
        run(sim)
        shocks = [f for f in sim.fronts if f.kind == SHOCK]
        assert len(shocks) == 1
        got = shocks[0]
        assert got.raw == pytest.approx(s.raw, abs=1e-12)
        assert got.left.u == pytest.approx(s_left.u, abs=1e-12)
        assert got.left.rho == pytest.approx(s_left.rho, abs=1e-12)
        assert got.right.u == pytest.approx(s_right.u, abs=1e-12)
        assert got.right.rho == pytest.approx(s_right.rho, abs=1e-12)

    def test_head_on_shocks(self):
        left = GasState(0.4, 1.0)
        m = shock_curve(left, TWO, "left", 0.8)
        right = shock_curve(m, ONE, "left", 1.1)
        s2 = Front(0, TWO, SHOCK, 0.0, 0.0, left, m, "")
        s1 = Front(1, ONE, SHOCK, 1.0, 0.0, m, right, "")
        sim = make_sim([s2, s1], left)
        ev = next_event(sim)
        out = resolve_event(sim, ev)
        sol = solve_riemann(left, right)
        fams = [f.family for f in out]
        assert fams == sorted(fams)
        got1 = [f for f in out if f.family is ONE]
        assert got1 and got1[0].raw == pytest.approx(
            sol.wave1.right.w1 - sol.wave1.left.w1, rel=1e-10)

    def test_cancellation_same_family(self):
        # 1-shock caught by an equal 1-rarefaction: mutual cancellation with
        # an opposite-family remainder of third order
        left = GasState(0.0, 1.0)
        s_right = shock_curve(left, ONE, "left", 1.2)
        sig = s_right.w1 - left.w1
        s = Front(0, ONE, SHOCK, 0.0, 0.0, left, s_right, "")
        # rarefaction of exactly opposite own-invariant jump
        r_right = GasState(s_right.u + sig / 2, s_right.rho - sig / 2)
        r = Front(1, ONE, RAREFACTION, 0.5, 0.0, s_right, r_right, "")
        pol = Scheduled(default_fn=lambda f, st:
                        (-1.0 if f.id == 0 else -2.0) if f.family is ONE else 1.0)
        sim = make_sim([s, r], left, policy=pol, mode=MODE_PAPER)
        ev = next_event(sim)
        out = resolve_event(sim, ev)
        one_part = sum(abs(f.raw) for f in out if f.family is ONE)
        two_part = sum(abs(f.raw) for f in out if f.family is TWO)
        assert one_part <= 1e-12
        assert 0 < two_part < sig**3

    def test_small_reflection_at_big_shock(self):
        # small 2-rarefaction catching a big 2-shock: emitted 1-front, shock
        # stays on the curve through its far state
        far = GasState(1.0, 0.01)
        near = shock_curve(far, TWO, "right", 1.0)
        base = GasState(near.u - 1e-3, near.rho - 1e-3)
        small = Front(0, TWO, RAREFACTION, 0.0, 0.0, base, near, "")
        big = Front(1, TWO, SHOCK, 1.0, 0.0, near, far, "")
        pol = Scheduled(default_fn=lambda f, st:
                        (2.0 if f.id == 0 else 0.5) if f.family is TWO else -1.0)
        sim = make_sim([small, big], base, policy=pol, eps_cancel=0.05)
        ev = next_event(sim)
        out = resolve_event(sim, ev)
        assert [f.family for f in out] == [ONE, TWO]
        emitted, shock = out
        assert shock.kind == SHOCK
        # emitted is a 1-compression whose size matches the local-slope factor
        assert emitted.kind == COMPRESSION
        d = 1e-6
        up = shock_curve(far, TWO, "right", near.rho + d).u
        dn = shock_curve(far, TWO, "right", near.rho - d).u
        slope = 2 * d / (up - dn)
        assert abs(emitted.raw) == pytest.approx(
            2e-3 * (1 - slope) / (1 + slope), rel=1e-3)
        on_curve = shock_curve(far, TWO, "right", shock.left.rho)
        assert shock.left.u == pytest.approx(on_curve.u, abs=1e-12)


class TestRunLoop:
    def test_no_fronts(self):
        sim = make_sim([], GasState(0.0, 1.0))
        sim, series, snaps = run(sim)
        assert sim.termination == "no_events"
        assert len(series.t) == 1

    def test_exact_mode_single_riemann(self):
        # a do-nothing datum: two fronts that recreate the Riemann fan
        left = GasState(0.6, 1.0)
        right = GasState(-0.6, 1.0)
        sol = solve_riemann(left, right)
        f2 = Front(0, TWO, SHOCK, 0.0, 0.0, left, sol.middle, "")
        f1 = Front(1, ONE, SHOCK, 1.0, 0.0, sol.middle, right, "")
        # deliberately misordered families so they collide and re-resolve
        sim = make_sim([f2, f1], left, policy=ExactSpeeds(), mode=MODE_EXACT)
        run(sim)
        fams = [f.family for f in sim.fronts]
        assert fams == sorted(fams)
        tv1, tv2 = total_variation(sim)
        assert tv1 == pytest.approx(sol.wave1.strength + abs(
            sol.wave2.right.w1 - sol.wave2.left.w1), rel=1e-9)

    def test_determinism(self):
        def build():
            left = GasState(0.0, 1.5)
            fronts = []
            st = left
            for i in range(6):
                f = line_front(i, TWO, i * 0.1, st, 0.01 * (1 if i % 2 else -1))
                fronts.append(f)
                st = f.right
            s = Front(6, ONE, SHOCK, 1.0, 0.0, st,
                      shock_curve(st, ONE, "left", st.rho * 1.5), "")
            fronts.append(s)
            return make_sim(fronts, left)

        a = build()
        b = build()
        run(a)
        run(b)
        ra = [(e.id, e.t, e.x, tuple(e.incoming)) for e in a.events]
        rb = [(e.id, e.t, e.x, tuple(e.incoming)) for e in b.events]
        assert ra == rb
        assert [(f.x, f.speed, f.raw) for f in a.fronts] == \
            [(f.x, f.speed, f.raw) for f in b.fronts]

    def test_family_speed_signs_enforced(self):
        left = GasState(0.0, 1.0)
        f = line_front(0, TWO, 0.0, left, 0.01)
        bad = Scheduled(default_fn=lambda fr, s: -1.0)   # wrong sign for fam 2
        with pytest.raises(Exception):
            make_sim([f], left, policy=bad)

    def test_vacuum_abort(self):
        left = GasState(0.0, 1.0)
        # rarefaction train that would drag the state to vacuum when crossing
        st = left
        fronts = []
        for i in range(3):
            f = line_front(i, ONE, 0.1 * i, st, -0.33)
            fronts.append(f)
            st = f.right
        with pytest.raises(VacuumFormation):
            make_sim(fronts, left, rho_floor=0.02)


class TestTV:
    def test_tv_additivity(self):
        left = GasState(0.0, 1.0)
        f = line_front(0, TWO, 0.0, left, 0.05)
        g = Front(1, ONE, SHOCK, 1.0, 0.0, f.right,
                  shock_curve(f.right, ONE, "left", 1.4), "")
        sim = make_sim([f, g], left)
        tv1, tv2 = total_variation(sim)
        assert tv1 == pytest.approx(abs(f.raw) * 0 + abs(g.raw), rel=1e-12)
        assert tv2 == pytest.approx(abs(f.raw) + abs(g.right.w2 - g.left.w2),
                                    rel=1e-12)
