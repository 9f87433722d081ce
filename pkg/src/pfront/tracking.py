"""Event-driven front tracking: ordered fronts, pairwise collision scheduling,
interaction resolution with exact Riemann strengths, pluggable speeds.

Speeds are the approximate degree of freedom: outgoing strengths always come
from exact wave relations, while each front travels at whatever its policy
assigns (family signs enforced: family 1 < 0 < family 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import MODE_EXACT, MODE_PAPER, SimConfig
from .errors import NonConvergence, PFrontError, VacuumFormation
from .interaction import reflect_off_big_shock, transmit_through_1shock
from .riemann import (
    GasState,
    WaveFamily,
    char_speed,
    shock_speed,
    solve_riemann,
)

SHOCK = "shock"
RAREFACTION = "rarefaction"
COMPRESSION = "compression"


def _raw_jump(family: WaveFamily, left: GasState, right: GasState) -> float:
    return (right.w1 - left.w1) if family is WaveFamily.ONE else (right.w2 - left.w2)


def _is_compressive(family: WaveFamily, raw: float) -> bool:
    return raw > 0 if family is WaveFamily.ONE else raw < 0


def _line_kind(family: WaveFamily, raw: float) -> str:
    return COMPRESSION if _is_compressive(family, raw) else RAREFACTION


@dataclass
class Front:
    """A moving jump. `left`/`right` are the constant states beside it; the
    chaining invariant ties each front's right state to its neighbour's left."""

    id: int
    family: WaveFamily
    kind: str
    x: float
    speed: float
    left: GasState
    right: GasState
    tag: str = ""

    @property
    def raw(self) -> float:
        """Signed jump of the family's own Riemann invariant, left to right."""
        return _raw_jump(self.family, self.left, self.right)

    @property
    def strength(self) -> float:
        """Spec convention: shocks and rarefactions positive, compressions
        negative."""
        mag = abs(self.raw)
        return -mag if self.kind == COMPRESSION else mag

    def as_dict(self) -> dict:
        return {
            "id": self.id, "family": int(self.family), "kind": self.kind,
            "x": self.x, "speed": self.speed, "strength": self.strength,
            "left": {"u": self.left.u, "rho": self.left.rho},
            "right": {"u": self.right.u, "rho": self.right.rho},
            "tag": self.tag,
        }


class SpeedPolicy:
    """Base policy; subclasses assign a signed speed to each front."""

    def speed_for(self, front: Front, sim: "SimState") -> float:
        raise NotImplementedError

    def on_event(self, sim: "SimState", event: "Event",
                 outgoing: list[Front]) -> None:
        """Hook called after each resolution, before speeds are assigned."""


class ExactSpeeds(SpeedPolicy):
    """Shocks at their Rankine-Hugoniot speed, rarefaction and compression
    fronts at the characteristic speed of the midpoint state."""

    def speed_for(self, front: Front, sim: "SimState") -> float:
        if front.kind == SHOCK and front.raw != 0.0:
            return shock_speed(front.left.rho, front.right.rho, front.family)
        mid = 0.5 * (front.left.rho + front.right.rho)
        return char_speed(mid, front.family)


class ConstantPair(SpeedPolicy):
    """All family-1 fronts at -c, all family-2 fronts at +c."""

    def __init__(self, c: float):
        if c <= 0:
            raise ValueError("ConstantPair speed must be positive")
        self.c = c

    def speed_for(self, front: Front, sim: "SimState") -> float:
        return front.family.sign * self.c


class Scheduled(SpeedPolicy):
    """Arbitrary finite speeds: per-front-id table, falling back to a default
    function of the front (typically keyed on its tag), falling back to +-c.
    Scenario controllers may update the table or retag fronts in on_event."""

    def __init__(self, default_c: float = 1.0, default_fn=None, table=None,
                 controller=None):
        self.default_c = default_c
        self.default_fn = default_fn
        self.table = dict(table or {})
        self.controller = controller

    def speed_for(self, front: Front, sim: "SimState") -> float:
        if front.id in self.table:
            return self.table[front.id]
        if self.default_fn is not None:
            v = self.default_fn(front, sim)
            if v is not None:
                return v
        return front.family.sign * self.default_c

    def on_event(self, sim, event, outgoing):
        if self.controller is not None:
            self.controller(sim, event, outgoing)


@dataclass
class Event:
    id: int
    t: float
    x: float
    indices: list[int]           # positions in sim.fronts at resolution time


@dataclass
class EventRecord:
    id: int
    t: float
    x: float
    kind: str                              # classification of the resolution
    incoming: list[tuple]                  # (family, kind, tag, strength, left_rho)
    outgoing: list[tuple]


@dataclass
class TVSeries:
    t: list[float] = field(default_factory=list)
    tv_w1: list[float] = field(default_factory=list)
    tv_w2: list[float] = field(default_factory=list)
    fronts: list[int] = field(default_factory=list)
    rho_min: list[float] = field(default_factory=list)
    event: list[int] = field(default_factory=list)

    def append(self, t, tv1, tv2, n, rho_min, event_id):
        self.t.append(t)
        self.tv_w1.append(tv1)
        self.tv_w2.append(tv2)
        self.fronts.append(n)
        self.rho_min.append(rho_min)
        self.event.append(event_id)


class EngineError(PFrontError):
    def __init__(self, msg, t=None, x=None, fronts=None):
        context = f" at t={t}, x={x}" if t is not None else ""
        super().__init__(msg + context)
        self.t, self.x, self.fronts = t, x, fronts


class SimState:
    """Ordered fronts plus the constant states between them and a clock.

    Single-owner: only its run loop mutates it.  Positions are kept in a
    numpy array synced with the front list; front.x attributes are refreshed
    lazily (participants at events, everyone at snapshots and on exit).
    """

    def __init__(self, fronts: list[Front], leftmost: GasState,
                 config: SimConfig, policy: SpeedPolicy):
        self.t = 0.0
        self.fronts = list(fronts)
        self.leftmost_state = leftmost
        self.config = config
        self.policy = policy
        self._next_front_id = max((f.id for f in fronts), default=-1) + 1
        self._next_event_id = 0
        self.tv1, self.tv2 = self._full_tv()
        self.rho_min = self._full_rho_min()
        self.series = TVSeries()
        self.events: list[EventRecord] = []
        self.log_events = True
        self.record_series = True
        self.snapshots: list[dict] = []
        self.snapshot_stride = 0        # 0: only initial/final
        self.termination = ""
        self._x = np.array([f.x for f in self.fronts], dtype=float)
        self._v = np.zeros(len(self.fronts), dtype=float)
        self.verify_chain(1e-9)
        for i, f in enumerate(self.fronts):
            self._set_speed(i, self.policy.speed_for(f, self))

    # -- bookkeeping helpers -------------------------------------------------

    def new_id(self) -> int:
        i = self._next_front_id
        self._next_front_id += 1
        return i

    def _set_speed(self, idx: int, v: float):
        f = self.fronts[idx]
        if f.family.sign * v <= 0:
            raise EngineError(
                f"family-{int(f.family)} front {f.id} assigned speed {v}",
                self.t, f.x)
        f.speed = v
        self._v[idx] = v

    def reassign_speeds(self):
        """Re-query the policy for every front (used by phase controllers)."""
        for i, f in enumerate(self.fronts):
            self._set_speed(i, self.policy.speed_for(f, self))

    def sync_positions(self):
        for i, f in enumerate(self.fronts):
            f.x = float(self._x[i])

    def _full_tv(self):
        tv1 = sum(abs(f.right.w1 - f.left.w1) for f in self.fronts)
        tv2 = sum(abs(f.right.w2 - f.left.w2) for f in self.fronts)
        return tv1, tv2

    def _full_rho_min(self):
        m = self.leftmost_state.rho
        for f in self.fronts:
            m = min(m, f.right.rho)
        return m

    def state_chain(self):
        yield self.leftmost_state
        for f in self.fronts:
            yield f.right

    def verify_chain(self, tol: float = 1e-9):
        prev = self.leftmost_state
        for f in self.fronts:
            if (abs(f.left.u - prev.u) > tol * max(1.0, abs(prev.u))
                    or abs(f.left.rho - prev.rho) > tol * max(1.0, prev.rho)):
                raise EngineError(
                    f"state chain broken before front {f.id}: "
                    f"{prev} vs {f.left}", self.t, f.x)
            prev = f.right
        if self.rho_min <= self.config.rho_floor:
            raise VacuumFormation("state chain touches the density floor",
                                  self.rho_min)

    def total_variation(self):
        return self.tv1, self.tv2

    def take_snapshot(self):
        self.sync_positions()
        self.snapshots.append({
            "t": self.t,
            "fronts": [f.as_dict() for f in self.fronts],
        })

    # -- fabrication ---------------------------------------------------------

    def make_front(self, family, kind, x, left, right, tag="") -> Front:
        return Front(self.new_id(), family, kind, x, 0.0, left, right, tag)

    def make_line_front(self, family, x, left, right, tag="") -> Front:
        raw = _raw_jump(family, left, right)
        return self.make_front(family, _line_kind(family, raw), x, left, right, tag)


def next_event(sim: SimState) -> Event | None:
    """Earliest future pairwise collision among adjacent approaching fronts.

    Simultaneous collisions at distinct locations are taken leftmost first;
    fronts sharing the collision point all join the event.
    """
    n = len(sim.fronts)
    if n < 2:
        return None
    x, v = sim._x, sim._v
    dv = v[:-1] - v[1:]
    gap = x[1:] - x[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        dt = np.where(dv > 0, gap / dv, np.inf)
    dt = np.maximum(dt, 0.0)
    i_min = int(np.argmin(dt))
    dt_min = float(dt[i_min])
    if not math.isfinite(dt_min) or sim.t + dt_min > sim.config.t_max:
        return None
    # group simultaneous pairs, leftmost collision point first
    close = np.nonzero(dt <= dt_min * (1 + 1e-12) + 1e-300)[0]
    points = x[close] + v[close] * dt_min
    order = np.argsort(points, kind="stable")
    x_event = float(points[order[0]])
    atol = 1e-12 * max(1.0, abs(x_event))
    members = [int(c) for c in close if abs(float(x[c] + v[c] * dt_min) - x_event) <= atol]
    # participants: consecutive fronts covered by the colliding pairs
    lo = min(members)
    hi = max(members) + 1
    idxs = list(range(lo, hi + 1))
    ev = Event(sim._next_event_id, sim.t + dt_min, x_event, idxs)
    sim._next_event_id += 1
    return ev


# -- binary resolution maps (paper bookkeeping) -------------------------------


def _split_rarefaction(sim, wave, x, tag=""):
    """Split a rarefaction wave into fronts of strength <= delta_r."""
    fronts = []
    n = max(1, math.ceil(wave.strength / sim.config.delta_r - 1e-12))
    left = wave.left
    for k in range(n):
        frac = (k + 1) / n
        w1 = wave.left.w1 + (wave.right.w1 - wave.left.w1) * frac
        w2 = wave.left.w2 + (wave.right.w2 - wave.left.w2) * frac
        right = GasState((w2 - w1) / 2.0, (w1 + w2) / 2.0) if k < n - 1 else wave.right
        fronts.append(sim.make_front(wave.family, RAREFACTION, x, left, right, tag))
        left = right
    return fronts


def _fronts_from_solution(sim, sol, x, tags=("", "")):
    out = []
    for wave, tag in ((sol.wave1, tags[0]), (sol.wave2, tags[1])):
        if wave.strength == 0.0:
            continue
        if wave.kind == SHOCK:
            out.append(sim.make_front(wave.family, SHOCK, x, wave.left,
                                      wave.right, tag))
        else:
            out.extend(_split_rarefaction(sim, wave, x, tag))
    return out


def _shift_of(front: Front) -> float:
    """Common (u, rho) increment across a family-2 line front."""
    return 0.5 * ((front.right.u - front.left.u)
                  + (front.right.rho - front.left.rho))


def _resolve_pair_paper(sim: SimState, fl: Front, fr: Front, x: float):
    """Binary bookkeeping maps; returns the outgoing front list."""
    A, B = fl.left, fr.right
    cfg = sim.config

    if fl.family is not fr.family:
        # head-on: left participant is family 2, right is family 1
        if not (fl.family is WaveFamily.TWO and fr.family is WaveFamily.ONE):
            raise EngineError("non-approaching opposite-family pair", sim.t, x,
                              [fl.id, fr.id])
        if fl.kind != SHOCK and fr.kind != SHOCK:
            # two rarefaction-curve fronts: exact invariant translation
            m = GasState(A.u - (B.w1 - A.w1) / 2.0, A.rho + (B.w1 - A.w1) / 2.0)
            out1 = sim.make_front(WaveFamily.ONE, fr.kind, x, A, m, fr.tag)
            out2 = sim.make_front(WaveFamily.TWO, fl.kind, x, m, B, fl.tag)
            return [out1, out2]
        if fl.kind != SHOCK and fr.kind == SHOCK:
            # small 2-front crossing a 1-shock
            eps = _shift_of(fl)
            new_behind, _eta = transmit_through_1shock(fr.left, fr.right, eps,
                                                       cfg.tol)
            shock = sim.make_front(WaveFamily.ONE, SHOCK, x, A, new_behind, fr.tag)
            small = sim.make_line_front(WaveFamily.TWO, x, new_behind, B, fl.tag)
            return [shock, small]
        if fl.kind == SHOCK and fr.kind != SHOCK:
            # mirror image: small 1-front crossing a 2-shock
            mA, mB = B.mirror(), A.mirror()
            m_left, m_right = fr.right.mirror(), fr.left.mirror()
            eps = 0.5 * ((m_left.u - mA.u) + (m_left.rho - mA.rho))
            new_behind, _eta = transmit_through_1shock(m_left, m_right, eps,
                                                       cfg.tol)
            shock_r = new_behind.mirror()
            shock = sim.make_front(WaveFamily.TWO, SHOCK, x, shock_r, B, fl.tag)
            small = sim.make_line_front(WaveFamily.ONE, x, A, shock_r, fr.tag)
            return [small, shock]
        # shock meets shock head-on: exact Riemann resolution
        sol = solve_riemann(A, B, cfg.tol)
        return _fronts_from_solution(sim, sol, x, (fr.tag, fl.tag))

    # same family
    fam = fl.family
    kinds = (fl.kind, fr.kind)
    if SHOCK in kinds and kinds != (SHOCK, SHOCK):
        shock, line = (fl, fr) if fl.kind == SHOCK else (fr, fl)
        # the absorption maps below assume the line front sits on the side
        # the shock is moving away from (family 2: left, family 1: right);
        # a shock overrunning fronts ahead of it resolves like any head-on
        # shock interaction, via the exact Riemann solution
        behind_side_ok = (line is fl) == (fam is WaveFamily.TWO)
        net = fl.raw + fr.raw
        if behind_side_ok and (not _is_compressive(fam, net) or abs(net) <= 1e-14):
            # shock consumed: both outgoing fronts are invariant translations
            if fam is WaveFamily.ONE:
                w1m, w2m = B.w1, A.w2
            else:
                w1m, w2m = A.w1, B.w2
            m = GasState((w2m - w1m) / 2.0, (w1m + w2m) / 2.0)
            out = []
            f1 = sim.make_line_front(WaveFamily.ONE, x, A, m,
                                     fl.tag if fam is WaveFamily.ONE else fr.tag)
            f2 = sim.make_line_front(WaveFamily.TWO, x, m, B,
                                     fl.tag if fam is WaveFamily.TWO else fr.tag)
            for f in (f1, f2):
                if abs(f.raw) > 1e-13 * max(1.0, abs(fl.raw), abs(fr.raw)):
                    out.append(f)
            return out
        use_line = behind_side_ok and (
            cfg.emission == "line"
            or (cfg.emission == "auto" and abs(line.raw) <= cfg.eps_cancel))
        if use_line:
            if fam is WaveFamily.TWO:
                # line front on the left catches the 2-shock
                base, near, far = A, shock.left, shock.right
                m = reflect_off_big_shock(base, near, far, fam, cfg.tol)
                emitted = sim.make_line_front(WaveFamily.ONE, x, base, m, line.tag)
                new_shock = sim.make_front(fam, SHOCK, x, m, far, shock.tag)
                return [emitted, new_shock]
            # family 1: line front on the right catches the 1-shock
            base, near, far = B, shock.right, shock.left
            m = reflect_off_big_shock(base, near, far, fam, cfg.tol)
            new_shock = sim.make_front(fam, SHOCK, x, far, m, shock.tag)
            emitted = sim.make_line_front(WaveFamily.TWO, x, m, base, line.tag)
            return [new_shock, emitted]
        sol = solve_riemann(A, B, cfg.tol)
        tags = (shock.tag, line.tag) if fam is WaveFamily.ONE else (line.tag, shock.tag)
        return _fronts_from_solution(sim, sol, x, tags)
    if kinds == (SHOCK, SHOCK):
        sol = solve_riemann(A, B, cfg.tol)
        tags = (fl.tag, fr.tag) if fam is WaveFamily.ONE else (fr.tag, fl.tag)
        return _fronts_from_solution(sim, sol, x, tags)
    # both rarefaction-curve fronts of one family: merge by signed addition
    out = sim.make_line_front(fam, x, A, B, fl.tag or fr.tag)
    if abs(out.raw) <= 1e-14 * max(1.0, abs(fl.raw) + abs(fr.raw)):
        return []
    return [out]


def resolve_event(sim: SimState, event: Event) -> list[Front]:
    """Replace the event's participants by the outgoing fronts."""
    idxs = event.indices
    participants = [sim.fronts[i] for i in idxs]
    x = event.x
    A = participants[0].left
    B = participants[-1].right

    if len(participants) < 2:
        raise EngineError("event with a single participant", event.t, x)
    if sim.config.mode == MODE_EXACT:
        sol = solve_riemann(A, B, sim.config.tol)
        outgoing = _fronts_from_solution(sim, sol, x)
    elif len(participants) == 2:
        outgoing = _resolve_pair_paper(sim, participants[0], participants[1], x)
    else:
        outgoing = _resolve_multi_paper(sim, participants, x)

    for f in outgoing:
        f.x = x
    # splice front list and arrays
    lo, hi = idxs[0], idxs[-1] + 1
    sim.fronts[lo:hi] = outgoing
    xs = np.full(len(outgoing), x, dtype=float)
    sim._x = np.concatenate([sim._x[:lo], xs, sim._x[hi:]])
    sim._v = np.concatenate([sim._v[:lo], np.zeros(len(outgoing)), sim._v[hi:]])

    # incremental TV and rho_min
    d1 = sum(abs(f.right.w1 - f.left.w1) for f in outgoing) - \
        sum(abs(f.right.w1 - f.left.w1) for f in participants)
    d2 = sum(abs(f.right.w2 - f.left.w2) for f in outgoing) - \
        sum(abs(f.right.w2 - f.left.w2) for f in participants)
    sim.tv1 += d1
    sim.tv2 += d2
    removed_min = min(f.right.rho for f in participants[:-1]) \
        if len(participants) > 1 else math.inf
    new_states = [f.right.rho for f in outgoing[:-1]]
    if new_states:
        sim.rho_min = min(sim.rho_min, min(new_states))
    if removed_min <= sim.rho_min + 1e-300 and removed_min < math.inf:
        sim.rho_min = sim._full_rho_min()
    if sim.rho_min <= sim.config.rho_floor:
        sim.sync_positions()
        raise VacuumFormation(
            f"density floor reached after event {event.id} at "
            f"t={event.t}, x={x}", sim.rho_min)

    # chain integrity around the splice
    prev = sim.leftmost_state if lo == 0 else sim.fronts[lo - 1].right
    stop = min(lo + len(outgoing) + 1, len(sim.fronts))
    for f in sim.fronts[lo:stop]:
        if (abs(f.left.u - prev.u) > 1e-9 * max(1.0, abs(prev.u))
                or abs(f.left.rho - prev.rho) > 1e-9 * max(1.0, prev.rho)):
            raise EngineError(
                f"chain broken by event {event.id}: {prev} vs {f.left}",
                event.t, x, [p.id for p in participants])
        prev = f.right

    if sim.log_events:
        sim.events.append(EventRecord(
            event.id, event.t, x,
            _classify(participants),
            [(int(f.family), f.kind, f.tag, f.strength, f.left.rho)
             for f in participants],
            [(int(f.family), f.kind, f.tag, f.strength, f.left.rho)
             for f in outgoing]))

    sim.policy.on_event(sim, event, outgoing)
    for i in range(lo, lo + len(outgoing)):
        sim._set_speed(i, sim.policy.speed_for(sim.fronts[i], sim))
    return outgoing


def _resolve_multi_paper(sim, participants, x):
    """Left-to-right sequence of binary maps for a simultaneous pile-up."""
    work = list(participants)
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        if guard > 100:
            raise NonConvergence("multi-front resolution did not settle")
        for i in range(len(work) - 1):
            a, b = work[i], work[i + 1]
            approaching = (a.family is WaveFamily.TWO and b.family is WaveFamily.ONE) \
                or (a.family is b.family)
            if approaching:
                out = _resolve_pair_paper(sim, a, b, x)
                work[i:i + 2] = out
                changed = True
                break
    return work


def _classify(participants) -> str:
    fams = {int(f.family) for f in participants}
    kinds = sorted(f.kind for f in participants)
    if len(participants) != 2:
        return f"multi({len(participants)})"
    head_on = len(fams) == 2
    return ("cross" if head_on else "merge") + ":" + "+".join(kinds)


def total_variation(sim: SimState) -> tuple[float, float]:
    """Sum over fronts of |dw1| and |dw2| (recomputed, not the running value)."""
    return sim._full_tv()


def run(sim: SimState, snapshot_each: int = 0, stop_when=None):
    """Iterate next_event/resolve_event until a stop condition.

    `stop_when(sim)` is consulted after every event.  Returns
    (sim, series, snapshots); deterministic for identical inputs.
    """
    cfg = sim.config
    sim.take_snapshot()
    if sim.record_series:
        sim.series.append(sim.t, sim.tv1, sim.tv2, len(sim.fronts),
                          sim.rho_min, -1)
    n_events = 0
    refresh = 0
    while True:
        if n_events >= cfg.max_events:
            sim.termination = "max_events"
            break
        ev = next_event(sim)
        if ev is None:
            sim.termination = "no_events" if math.isinf(cfg.t_max) else "t_max"
            if math.isfinite(cfg.t_max) and cfg.t_max > sim.t:
                dt = cfg.t_max - sim.t
                sim._x = sim._x + sim._v * dt
                sim.t = cfg.t_max
            break
        dt = ev.t - sim.t
        sim._x = sim._x + sim._v * dt
        sim.t = ev.t
        try:
            resolve_event(sim, ev)
        except (VacuumFormation, NonConvergence) as exc:
            sim.termination = f"error:{type(exc).__name__}"
            sim.sync_positions()
            raise
        n_events += 1
        refresh += 1
        if refresh >= 20000:
            sim.tv1, sim.tv2 = sim._full_tv()
            refresh = 0
        if sim.record_series:
            sim.series.append(sim.t, sim.tv1, sim.tv2, len(sim.fronts),
                              sim.rho_min, ev.id)
        if snapshot_each and n_events % snapshot_each == 0:
            sim.take_snapshot()
        if sim.tv1 + sim.tv2 >= cfg.tv_max:
            sim.termination = "tv_max"
            break
        if stop_when is not None and stop_when(sim):
            sim.termination = "stop_condition"
            break
    sim.tv1, sim.tv2 = sim._full_tv()
    sim.sync_positions()
    sim.take_snapshot()
    return sim, sim.series, sim.snapshots


def inject_fronts(sim: SimState, fronts: list[Front]):
    """Insert pre-chained fronts into the profile (scheduled initial waves
    realized lazily).  The sequence must begin and end on the state of the
    region it lands in; positions must fall strictly inside that region."""
    if not fronts:
        return
    sim.sync_positions()
    x_lo, x_hi = fronts[0].x, fronts[-1].x
    idx = 0
    while idx < len(sim.fronts) and sim.fronts[idx].x <= x_lo:
        idx += 1
    if idx < len(sim.fronts) and sim.fronts[idx].x <= x_hi:
        raise EngineError("injection overlaps an existing front", sim.t, x_hi)
    region = sim.leftmost_state if idx == 0 else sim.fronts[idx - 1].right
    for probe, name in ((fronts[0].left, "left"), (fronts[-1].right, "right")):
        if (abs(probe.u - region.u) > 1e-9 * max(1.0, abs(region.u))
                or abs(probe.rho - region.rho) > 1e-9 * max(1.0, region.rho)):
            raise EngineError(
                f"injected {name} state {probe} does not match region {region}",
                sim.t, x_lo)
    sim.fronts[idx:idx] = fronts
    sim._x = np.concatenate([sim._x[:idx],
                             np.array([f.x for f in fronts], dtype=float),
                             sim._x[idx:]])
    sim._v = np.concatenate([sim._v[:idx], np.zeros(len(fronts)), sim._v[idx:]])
    for k, f in enumerate(fronts):
        sim._set_speed(idx + k, sim.policy.speed_for(f, sim))
    sim.tv1, sim.tv2 = sim._full_tv()
    sim.rho_min = min(sim.rho_min, min(f.right.rho for f in fronts))


# -- profile discretization ---------------------------------------------------


@dataclass(frozen=True)
class ExplicitFront:
    """A jump inserted on top of the sampled profile at position x.

    For shocks, `magnitude` is the (positive) jump of the family's own
    invariant; the downstream side is derived from the admissible shock
    curve.  For compressions it is the (positive) size of the reversed
    rarefaction-curve jump.
    """

    x: float
    family: WaveFamily
    kind: str
    magnitude: float
    tag: str = ""


def discretize_profile(xs, w1s, w2s, explicit: list[ExplicitFront],
                       config: SimConfig, policy: SpeedPolicy,
                       tag: str = "") -> SimState:
    """Turn sampled invariant data plus explicit jumps into a SimState.

    Monotone runs of each invariant become fans of rarefaction or compression
    fronts of strength <= delta_r; consecutive same-direction sample jumps
    smaller than delta_r are merged.  Each explicit front shifts everything
    to its right by its own jump.
    """
    if len(xs) != len(w1s) or len(xs) != len(w2s):
        raise ValueError("xs, w1s, w2s must have equal length")
    items = []   # (x, family, dw1, dw2, kind_hint, tag)
    for i in range(1, len(xs)):
        d1 = w1s[i] - w1s[i - 1]
        d2 = w2s[i] - w2s[i - 1]
        xm = 0.5 * (xs[i] + xs[i - 1])
        if d1 != 0.0:
            items.append([xm, WaveFamily.ONE, d1, tag])
        if d2 != 0.0:
            items.append([xm, WaveFamily.TWO, d2, tag])
    for ef in explicit:
        items.append([ef.x, ef.family, ef, ef.tag])
    items.sort(key=lambda it: it[0])

    fronts: list[Front] = []
    state = GasState((w2s[0] - w1s[0]) / 2.0, (w1s[0] + w2s[0]) / 2.0)
    leftmost = state
    counter = [0]

    def nid():
        counter[0] += 1
        return counter[0] - 1

    def emit_line(x, fam, dw, tg):
        nonlocal state
        # split into <= delta_r pieces
        n = max(1, math.ceil(abs(dw) / config.delta_r - 1e-12))
        for k in range(n):
            piece = dw / n
            if fam is WaveFamily.ONE:
                nxt = GasState(state.u - piece / 2.0, state.rho + piece / 2.0)
            else:
                nxt = GasState(state.u + piece / 2.0, state.rho + piece / 2.0)
            if nxt.rho <= config.rho_floor:
                raise VacuumFormation("profile reaches the density floor", nxt.rho)
            kind = _line_kind(fam, piece)
            fronts.append(Front(nid(), fam, kind, x, 0.0, state, nxt, tg))
            state = nxt

    # merge same-family same-sign consecutive jumps up to delta_r
    merged = []
    for it in items:
        if isinstance(it[2], ExplicitFront):
            merged.append(it)
            continue
        x, fam, dw, tg = it
        if (merged and not isinstance(merged[-1][2], ExplicitFront)
                and merged[-1][1] is fam
                and (merged[-1][2] > 0) == (dw > 0)
                and abs(merged[-1][2] + dw) <= config.delta_r):
            merged[-1][2] += dw
            merged[-1][0] = x
        else:
            merged.append([x, fam, dw, tg])

    for it in merged:
        x, fam, payload, tg = it
        if isinstance(payload, ExplicitFront):
            ef = payload
            if ef.kind == SHOCK:
                if ef.family is WaveFamily.ONE:
                    target = state.w1 + ef.magnitude
                    right = _right_of_1shock(state, target, config)
                else:
                    target = state.w2 - ef.magnitude
                    right = _right_of_2shock(state, target, config)
                fronts.append(Front(nid(), ef.family, SHOCK, x, 0.0, state,
                                    right, ef.tag))
                state = right
            else:
                # own-invariant jump: family-1 rarefactions are negative,
                # family-2 positive; compressions reversed
                expansive = -1.0 if ef.family is WaveFamily.ONE else 1.0
                dw = expansive * ef.magnitude
                if ef.kind == COMPRESSION:
                    dw = -dw
                if ef.kind == RAREFACTION and ef.magnitude > config.delta_r:
                    emit_line(x, ef.family, dw, ef.tag)
                else:
                    nxt_rho = state.rho + dw / 2.0
                    if nxt_rho <= config.rho_floor:
                        raise VacuumFormation("explicit front reaches the floor",
                                              nxt_rho)
                    if ef.family is WaveFamily.ONE:
                        nxt = GasState(state.u - dw / 2.0, nxt_rho)
                    else:
                        nxt = GasState(state.u + dw / 2.0, nxt_rho)
                    fronts.append(Front(nid(), ef.family, ef.kind, x, 0.0,
                                        state, nxt, ef.tag))
                    state = nxt
        else:
            emit_line(x, fam, payload, tg)

    sim = SimState(fronts, leftmost, config, policy)
    return sim


def _right_of_1shock(left: GasState, target_w1: float, config: SimConfig) -> GasState:
    """Right state of the 1-shock from `left` with prescribed w1 value."""
    from scipy.optimize import brentq

    from .riemann import shock_delta_u

    def g(rho):
        u = left.u + shock_delta_u(left.rho, rho)
        return (rho - u) - target_w1

    hi = left.rho * 2.0
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e12:
            raise NonConvergence("shock construction bracket failed")
    rho = brentq(g, left.rho * (1 + 1e-15), hi, xtol=1e-300, rtol=8.9e-16)
    return GasState(left.u + shock_delta_u(left.rho, rho), rho)


def _right_of_2shock(left: GasState, target_w2: float, config: SimConfig) -> GasState:
    """Right state of the 2-shock from `left` with prescribed w2 value."""
    from scipy.optimize import brentq

    from .riemann import shock_delta_u

    def g(rho):
        u = left.u + shock_delta_u(left.rho, rho)   # rho < left.rho for 2-shock
        return (rho + u) - target_w2

    lo = config.rho_floor * 2.0
    rho = brentq(g, lo, left.rho * (1 - 1e-15), xtol=1e-300, rtol=8.9e-16)
    return GasState(left.u + shock_delta_u(left.rho, rho), rho)
