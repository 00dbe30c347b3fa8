"""Leaderless total-order broadcast server.

Every message carries a client-chosen bet, a timestamp by which the
client expects delivery everywhere. Servers observe (bet, client,
message) tuples, relay them, vote through one consensus instance per
tuple on whether the bet arrived in time, and app-deliver positive
tuples in bet order once the lock time (a 4f+1-supported lower bound
on other servers' clocks) has passed the bet, so no earlier tuple can
still win a consensus instance.
"""

from __future__ import annotations

from . import trace as tr
from .blink import BlinkInstance
from .types import (
    NEG_INF,
    BroadcastTuple,
    Decision,
    InstanceKey,
    Message,
    Observe,
    Suggest,
    Time,
    quorum_large,
)


class FlutterServer:
    def __init__(self, name: str, n: int, f: int, oracle, periodic_beat: int | None = None):
        self.name = name
        self.n = n
        self.f = f
        self.oracle = oracle
        self.periodic_beat = periodic_beat
        self.observed: set[BroadcastTuple] = set()
        self.proposed: set[BroadcastTuple] = set()
        self.candidates: set[BroadcastTuple] = set()
        self.delivered: set[tuple[str, bytes]] = set()
        self.decisions: dict[BroadcastTuple, bool] = {}
        self.last_processed: BroadcastTuple | None = None
        self.remote_times: dict[str, int | float] = {}
        self.instances: dict[InstanceKey, BlinkInstance] = {}
        self._expiry: dict[str, BroadcastTuple] = {}
        self._server_set: frozenset[str] = frozenset()
        self._client_set: frozenset[str] = frozenset()

    def on_init(self, ctx) -> None:
        self._server_set = frozenset(ctx.servers)
        self._client_set = frozenset(ctx.clients)
        self.remote_times = {s: NEG_INF for s in ctx.servers}
        if self.periodic_beat is not None:
            ctx.schedule_local(ctx.local_time() + self.periodic_beat, "pbeat")

    def lock_time(self) -> int | float:
        ranked = sorted(self.remote_times.values(), reverse=True)
        return ranked[quorum_large(self.f) - 1]

    def instance(self, key: InstanceKey) -> BlinkInstance:
        inst = self.instances.get(key)
        if inst is None:
            inst = self.instances[key] = BlinkInstance(key, self.f, self)
        return inst

    def on_deliver(self, ctx, src: str, msg) -> None:
        if isinstance(msg, Message) and src in self._client_set:
            self._on_message(ctx, src, msg.message, msg.bet)
        elif isinstance(msg, Observe) and src in self._server_set:
            self._spot(ctx, msg.tuple)
            self._process_next(ctx)
        elif isinstance(msg, Time) and src in self._server_set:
            self._on_time(ctx, src, msg.time)
        elif isinstance(msg, Suggest) and src in self._server_set:
            self.instance(msg.instance).on_suggest(ctx, src, msg.value)

    def _on_message(self, ctx, client: str, message: bytes, bet: int) -> None:
        t = BroadcastTuple(client, message, bet)
        self._spot(ctx, t)
        if t not in self.proposed:
            self.proposed.add(t)
            self.instance(t).propose(ctx, bet > ctx.local_time())
        self._process_next(ctx)

    def _spot(self, ctx, t: BroadcastTuple) -> None:
        if t.bet > self.lock_time():
            self.candidates.add(t)
        if t not in self.observed:
            # Relay before scheduling the beat: every Time(b') with b' >= bet
            # then trails the Observe on each link, so whoever advances our
            # entry past the bet has already spotted the tuple.
            for server in ctx.servers:
                ctx.send(server, Observe(t))
            token = f"expiry@{len(self._expiry)}"
            self._expiry[token] = t
            ctx.schedule_local(t.bet, f"beat@{t.bet}")
            ctx.schedule_local(t.bet, token)
            self.observed.add(t)

    def on_timer(self, ctx, token: str) -> None:
        if token == "pbeat":
            self._beat(ctx)
            ctx.schedule_local(ctx.local_time() + self.periodic_beat, "pbeat")
        elif token.startswith("beat@"):
            self._beat(ctx)
        else:
            t = self._expiry[token]
            if t not in self.proposed and t.bet <= ctx.local_time():
                self.proposed.add(t)
                self.instance(t).propose(ctx, False)

    def _beat(self, ctx) -> None:
        now = ctx.local_time()
        for server in ctx.servers:
            ctx.send(server, Time(now))

    def _on_time(self, ctx, src: str, time: int) -> None:
        if time > self.remote_times[src]:
            self.remote_times[src] = time
        self._process_next(ctx)

    def dep_propose(self, key: InstanceKey, value: bool) -> None:
        self.oracle.propose(key, self.name, value)

    def on_dep_decide(self, ctx, key: InstanceKey, value: bool) -> None:
        self.instance(key).on_dep_decide(ctx, value)

    def on_decided(self, ctx, key: InstanceKey, value: bool) -> None:
        if not isinstance(key, BroadcastTuple):
            return
        self.decisions[key] = value
        ctx.send(key.client, Decision(key.message, key.bet, value))
        self._process_next(ctx)

    def _process_next(self, ctx) -> None:
        while True:
            best: BroadcastTuple | None = None
            for t in self.candidates:
                if self.last_processed is not None and t <= self.last_processed:
                    continue
                if best is None or t < best:
                    best = t
            if best is None or best not in self.decisions or best.bet > self.lock_time():
                return
            if self.decisions[best]:
                self._order(ctx, best)
            self.last_processed = best

    def _order(self, ctx, t: BroadcastTuple) -> None:
        if (t.client, t.message) not in self.delivered:
            self.delivered.add((t.client, t.message))
            ctx.emit(
                tr.APP_DELIVER,
                {"client": t.client, "message": t.message.hex(), "bet": t.bet},
            )
