"""Deterministic discrete-event simulator.

Reliable authenticated FIFO links with per-message delays in [1, delta],
static per-process clock offsets, local-time timers, and full tracing.
Events are processed in (time, global sequence) order; handler work is
instantaneous (takes zero ticks). Quiescence = empty event queue.
"""

from __future__ import annotations

import heapq
import random

from . import trace as tr
from .errors import BudgetExceededError, ConfigError
from .types import SimTime, WireMessage, instance_payload, wire_payload

_DELIVER = 0
_TIMER = 1
_DEP = 2


class ExactDelta:
    """Every message takes exactly delta."""

    name = "exact_delta"

    def __init__(self, delta: int):
        self.delta = delta

    def delay(self, src: str, dst: str, nth: int) -> int:
        return self.delta


class SeededRandom:
    """Uniform delays in [1, delta], drawn in send order from one stream."""

    name = "seeded_random"

    def __init__(self, delta: int, seed):
        self.delta = delta
        self.rng = random.Random(seed)

    def delay(self, src: str, dst: str, nth: int) -> int:
        return self.rng.randint(1, self.delta)


class Scripted:
    """Per-link delay lists keyed "src->dst"; unlisted sends take delta."""

    name = "scripted"

    def __init__(self, delta: int, table: dict[str, list[int]]):
        self.delta = delta
        self.table = table

    def delay(self, src: str, dst: str, nth: int) -> int:
        delays = self.table.get(f"{src}->{dst}")
        if delays is None or nth >= len(delays):
            return self.delta
        d = delays[nth]
        if not 1 <= d <= self.delta:
            raise ConfigError(f"scripted delay {d} on {src}->{dst} outside [1, {self.delta}]")
        return d


class ClockModel:
    """Static per-process offsets; local_time(p, t) = t + offset(p)."""

    def __init__(self, offsets: dict[str, int] | None = None):
        self.offsets = offsets or {}

    def local(self, name: str, t: SimTime) -> SimTime:
        return t + self.offsets.get(name, 0)

    def global_for_local(self, name: str, local: SimTime) -> SimTime:
        return local - self.offsets.get(name, 0)


class Context:
    """Per-process handle into the simulator, passed to every handler."""

    __slots__ = ("sim", "name")

    def __init__(self, sim: "Simulator", name: str):
        self.sim = sim
        self.name = name

    def local_time(self) -> SimTime:
        return self.sim.clock.local(self.name, self.sim.now)

    def send(self, dst: str, msg: WireMessage) -> None:
        self.sim.send(self.name, dst, msg)

    def schedule_local(self, fire_at_local: SimTime, token: str) -> None:
        self.sim.schedule_timer(self.name, fire_at_local, token)

    def schedule_global(self, fire_at: SimTime, token: str) -> None:
        self.sim.schedule_global(self.name, fire_at, token)

    def emit(self, kind: str, payload: dict) -> None:
        self.sim.emit(self.name, kind, payload)

    @property
    def servers(self) -> list[str]:
        return self.sim.servers

    @property
    def clients(self) -> list[str]:
        return self.sim.clients

    # Adversary-only conveniences. Correct processes never touch these:
    # the model gives them only their local clock and their own inbox.
    def now(self) -> SimTime:
        return self.sim.now

    @property
    def trace(self) -> list[tr.TraceEvent]:
        return self.sim.trace

    @property
    def pad(self) -> dict:
        return self.sim.adversary_pad


class Simulator:
    def __init__(self, strategy, clock: ClockModel | None = None, step_budget: int = 1_000_000):
        self.strategy = strategy
        self.clock = clock or ClockModel()
        self.step_budget = step_budget
        self.now: SimTime = 0
        self.trace: list[tr.TraceEvent] = []
        self.handlers: dict[str, object] = {}
        self.contexts: dict[str, Context] = {}
        self.servers: list[str] = []
        self.clients: list[str] = []
        self.adversary_pad: dict = {}
        self._heap: list = []
        self._seq = 0
        self._links: dict[tuple[str, str], list] = {}  # (src, dst) -> [last_delivery, sends]
        self._started = False
        self._steps = 0

    def add_process(self, name: str, kind: str, handler) -> None:
        if name in self.handlers:
            raise ConfigError(f"duplicate process {name}")
        self.handlers[name] = handler
        self.contexts[name] = Context(self, name)
        (self.servers if kind == "server" else self.clients).append(name)

    def _push(self, time: SimTime, kind: int, a, b, c=None) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (time, self._seq, kind, a, b, c))

    def emit(self, process: str, kind: str, payload: dict) -> None:
        self.trace.append(tr.TraceEvent(self.now, process, kind, payload))

    def send(self, src: str, dst: str, msg: WireMessage) -> None:
        if dst not in self.handlers:
            raise ConfigError(f"send to unknown process {dst}")
        link = self._links.get((src, dst))
        if link is None:
            link = self._links[(src, dst)] = [0, 0]
        d = self.strategy.delay(src, dst, link[1])
        link[1] += 1
        when = self.now + d
        if when < link[0]:  # FIFO repair: never deliver before an earlier send
            when = link[0]
        link[0] = when
        self.emit(src, tr.SEND, {"dst": dst, "msg": wire_payload(msg)})
        self._push(when, _DELIVER, src, dst, msg)

    def schedule_timer(self, name: str, fire_at_local: SimTime, token: str) -> None:
        when = self.clock.global_for_local(name, fire_at_local)
        if when < self.now:  # past target: fires this step, after the current handler
            when = self.now
        self._push(when, _TIMER, name, token)

    def schedule_global(self, name: str, when: SimTime, token: str) -> None:
        """Global-time timer, for scenario scripts rather than protocol logic."""
        if when < self.now:
            when = self.now
        self._push(when, _TIMER, name, token)

    def schedule_dep_decide(self, when: SimTime, server: str, instance, value: bool) -> None:
        if when < self.now:
            when = self.now
        self._push(when, _DEP, server, instance, value)

    def start(self) -> None:
        """Run init hooks once, in process insertion order."""
        if self._started:
            return
        self._started = True
        for name, handler in self.handlers.items():
            init = getattr(handler, "on_init", None)
            if init is not None:
                init(self.contexts[name])

    def run(self, until: SimTime | None = None) -> bool:
        """Process events until quiescence or past `until`.

        Returns True iff the queue drained (quiescence). A cutoff leaves
        pending events in the queue for inspection.
        """
        self.start()
        heap = self._heap
        while heap:
            if until is not None and heap[0][0] > until:
                return False
            self._steps += 1
            if self._steps > self.step_budget:
                raise BudgetExceededError(f"no quiescence after {self.step_budget} events")
            time, _seq, kind, a, b, c = heapq.heappop(heap)
            self.now = time
            if kind == _DELIVER:
                handler = self.handlers[b]
                self.emit(b, tr.DELIVER, {"src": a, "msg": wire_payload(c)})
                handler.on_deliver(self.contexts[b], a, c)
            elif kind == _TIMER:
                handler = self.handlers[a]
                self.emit(a, tr.TIMER_FIRE, {"token": b})
                handler.on_timer(self.contexts[a], b)
            else:  # _DEP: decide indication from the weak-consensus oracle
                handler = self.handlers[a]
                self.emit(a, tr.DEP_DECIDE, {"instance": instance_payload(b), "value": c})
                handler.on_dep_decide(self.contexts[a], b, c)
        return True

    @property
    def pending(self) -> list:
        return sorted(self._heap)
