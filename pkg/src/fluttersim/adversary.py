"""Byzantine process behaviors.

Each behavior replaces a process handler wholesale: it may send
arbitrary well-formed wire messages on real links but cannot forge
sender identity, drop other processes' traffic, or act outside the
network model. Behaviors share a scratchpad and may read the trace,
so separate faulty processes can coordinate adaptively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .types import BroadcastTuple, InstanceKey, Message, Observe, Suggest, Time
from . import trace as tr


@dataclass
class BehaviorSetup:
    """Resolved per-process behavior config handed over by the runner."""

    n: int
    f: int
    delta: int
    seed: object = None
    params: dict = field(default_factory=dict)


def _sighted_key(src: str, msg) -> InstanceKey | None:
    if isinstance(msg, Suggest):
        return msg.instance
    if isinstance(msg, Observe):
        return msg.tuple
    if isinstance(msg, Message):
        return BroadcastTuple(src, msg.message, msg.bet)
    return None


class Equivocator:
    """Suggests conflicting consensus inputs to different servers."""

    role = "server"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name
        self.mode = setup.params.get("mode", "split")
        if self.mode not in ("split", "all_false", "all_true"):
            raise ConfigError(f"unknown equivocator mode {self.mode!r}")
        self.initial = list(setup.params.get("instances", []))
        self.react = bool(setup.params.get("react", True))
        self.seen: set[InstanceKey] = set()

    def _equivocate(self, ctx, key: InstanceKey) -> None:
        if key in self.seen:
            return
        self.seen.add(key)
        half = len(ctx.servers) // 2
        for i, server in enumerate(ctx.servers):
            if self.mode == "split":
                value = i < half
            else:
                value = self.mode == "all_true"
            ctx.send(server, Suggest(key, value))

    def on_init(self, ctx) -> None:
        for label in self.initial:
            self._equivocate(ctx, label)

    def on_timer(self, ctx, token: str) -> None:
        pass

    def on_deliver(self, ctx, src: str, msg) -> None:
        if not self.react:
            return
        key = _sighted_key(src, msg)
        if key is not None:
            self._equivocate(ctx, key)


class TimeLiar:
    """Floods clock reports far from its real local time."""

    role = "server"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name
        self.ahead = int(setup.params.get("ahead", 1000))
        # Two liars echoing each other would blast forever; a finite budget
        # keeps every run quiescent without weakening the single-liar case.
        self.blasts_left = int(setup.params.get("max_blasts", 64))
        self.last_blast: int | None = None

    def _blast(self, ctx) -> None:
        if self.blasts_left <= 0 or self.last_blast == ctx.now():
            return
        self.blasts_left -= 1
        self.last_blast = ctx.now()
        lie = ctx.local_time() + self.ahead
        for server in ctx.servers:
            ctx.send(server, Time(lie))

    def on_init(self, ctx) -> None:
        self._blast(ctx)

    def on_timer(self, ctx, token: str) -> None:
        pass

    def on_deliver(self, ctx, src: str, msg) -> None:
        if src != self.name:
            self._blast(ctx)


class ObserveForger:
    """Injects an observation for a message no client ever sent."""

    role = "server"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name
        self.victim = setup.params.get("client")
        self.message = bytes.fromhex(setup.params.get("message", "f00d"))
        self.bet = setup.params.get("bet")
        self.bet_offset = int(setup.params.get("bet_offset", 5 * setup.delta))

    def on_init(self, ctx) -> None:
        victim = self.victim if self.victim is not None else (ctx.clients[0] if ctx.clients else None)
        if victim is None or victim not in ctx.clients:
            raise ConfigError(f"observe_forger needs an existing victim client, got {victim!r}")
        bet = self.bet if self.bet is not None else ctx.local_time() + self.bet_offset
        forged = BroadcastTuple(victim, self.message, bet)
        for server in ctx.servers:
            ctx.send(server, Observe(forged))

    def on_timer(self, ctx, token: str) -> None:
        pass

    def on_deliver(self, ctx, src: str, msg) -> None:
        pass


class Mute:
    """Sends nothing at all."""

    role = "server"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name

    def on_init(self, ctx) -> None:
        pass

    def on_timer(self, ctx, token: str) -> None:
        pass

    def on_deliver(self, ctx, src: str, msg) -> None:
        pass


class StaleRelay:
    """Reports a clock past each tuple's bet before relaying the tuple."""

    role = "server"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name
        self.lead = int(setup.params.get("lead", 0))
        self.seen: set[BroadcastTuple] = set()

    def on_init(self, ctx) -> None:
        pass

    def on_timer(self, ctx, token: str) -> None:
        pass

    def on_deliver(self, ctx, src: str, msg) -> None:
        key = _sighted_key(src, msg)
        if not isinstance(key, BroadcastTuple) or key in self.seen:
            return
        self.seen.add(key)
        # Time first, Observe second on every link: FIFO then shows each
        # peer a clock already past the bet before it can spot the tuple.
        for server in ctx.servers:
            ctx.send(server, Time(key.bet + self.lead))
        for server in ctx.servers:
            ctx.send(server, Observe(key))


class PartialDisseminator:
    """Faulty client: submits to a strict subset of servers, then goes silent."""

    role = "client"

    def __init__(self, name: str, setup: BehaviorSetup):
        self.name = name
        self.targets = list(setup.params.get("targets", [0]))
        self.at = int(setup.params.get("at", 0))
        self.bet_offset = int(setup.params.get("bet_offset", 10 * setup.delta))
        self.message = bytes.fromhex(setup.params.get("message", "fade"))

    def on_init(self, ctx) -> None:
        ctx.schedule_global(self.at, "send")

    def on_timer(self, ctx, token: str) -> None:
        if token != "send":
            return
        for i in self.targets:
            if not 0 <= i < len(ctx.servers):
                raise ConfigError(f"partial_disseminator target {i} out of range")
        ctx.emit(tr.BROADCAST, {"message": self.message.hex()})
        bet = ctx.local_time() + self.bet_offset
        for i in self.targets:
            ctx.send(ctx.servers[i], Message(self.message, bet))

    def on_deliver(self, ctx, src: str, msg) -> None:
        pass


BEHAVIORS: dict[str, type] = {
    "equivocator": Equivocator,
    "time_liar": TimeLiar,
    "observe_forger": ObserveForger,
    "mute": Mute,
    "stale_relay": StaleRelay,
    "partial_disseminator": PartialDisseminator,
}


def builtin_behaviors() -> dict[str, type]:
    return dict(BEHAVIORS)
