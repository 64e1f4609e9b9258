"""Deterministic discrete-event runtime hosting one actor per network node.

Every link has a latency of one tick and every actor consumes at most one
inbox message per tick. With ``inbox_capacity`` set, a delivery that finds
the recipient's inbox full is rejected; the sender parks the message in its
pending store and retries after ``retry_delay`` ticks until it is accepted.
"""
from __future__ import annotations

import heapq
import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Protocol

from .errors import SimulationError
from .graph import Graph

DEFAULT_TICK_BUDGET = 10**9
DEFAULT_RETRY_DELAY = 8


class Kind(str, Enum):
    WAKE = "WAKE"
    COUNT = "COUNT"
    ALLOC = "ALLOC"
    LABEL = "LABEL"  # endpoint label exchange across non-tree edges
    EDGE = "EDGE"
    BLUE_REQ = "BLUE_REQ"
    BLUE_RESP = "BLUE_RESP"
    # local kick-offs, never sent over a link
    START = "START"
    # free-form kinds for tests and toy protocols
    PING = "PING"
    PONG = "PONG"


@dataclass
class Message:
    src: int
    dst: int
    kind: Kind
    payload: Any = None
    is_reply: bool = False


class Actor(Protocol):
    def handle(self, net: "SimNetwork", msg: Message) -> None: ...


@dataclass
class SimStats:
    """Counters for one ``run_until_quiescent`` call."""

    sent: dict[str, int] = field(default_factory=dict)
    delivered: dict[str, int] = field(default_factory=dict)
    ticks: int = 0
    rejections: int = 0
    retries: int = 0
    max_inbox: list[int] = field(default_factory=list)

    @property
    def total_sent(self) -> int:
        return sum(self.sent.values())

    def record(self, prefix: str = "") -> dict[str, int]:
        """Flat ``name -> counter`` view used for metrics output."""
        out = {f"{prefix}sent.{k}": v for k, v in sorted(self.sent.items())}
        out.update({f"{prefix}delivered.{k}": v for k, v in sorted(self.delivered.items())})
        out[f"{prefix}sent.total"] = self.total_sent
        out[f"{prefix}ticks"] = self.ticks
        out[f"{prefix}rejections"] = self.rejections
        out[f"{prefix}retries"] = self.retries
        out[f"{prefix}max_inbox"] = max(self.max_inbox, default=0)
        return out


_DELIVER, _PROCESS, _RETRY, _LOCAL = range(4)


class SimNetwork:
    def __init__(
        self,
        graph: Graph,
        actors: list[Actor],
        inbox_capacity: int | None = None,
        retry_delay: int = DEFAULT_RETRY_DELAY,
        seed: int = 0,
        tick_budget: int = DEFAULT_TICK_BUDGET,
    ):
        if len(actors) != graph.n:
            raise SimulationError("need exactly one actor per node")
        if inbox_capacity is not None and inbox_capacity < 1:
            raise SimulationError("inbox_capacity must be positive")
        if retry_delay < 1:
            raise SimulationError("retry_delay must be positive")
        self.graph = graph
        self.actors = actors
        self.inbox_capacity = inbox_capacity
        self.retry_delay = retry_delay
        self.tick_budget = tick_budget
        self.rng = random.Random(seed)
        self.now = 0
        self._events: list[tuple[int, int, int, Any]] = []
        self._seq = itertools.count()
        self._inbox: list[deque[Message]] = [deque() for _ in actors]
        self._busy = [False] * graph.n
        # temporary store of rejected deliveries, owned by the sender
        self.pending: list[dict[int, Message]] = [{} for _ in actors]
        self._running = False
        self.sent: Counter[str] = Counter()
        self.delivered: Counter[str] = Counter()
        self.rejections = 0
        self.retries = 0
        self._max_inbox = [0] * graph.n

    def _push(self, when: int, what: int, data: Any) -> None:
        heapq.heappush(self._events, (when, next(self._seq), what, data))

    def send(self, msg: Message) -> None:
        if msg.src != msg.dst and not self.graph.has_edge(msg.src, msg.dst):
            raise SimulationError(f"illegal topology bypass: {msg.src} -> {msg.dst}")
        self.sent[msg.kind.value] += 1
        self._push(self.now + 1, _DELIVER, msg)

    def kick(self, node: int, payload: Any = None, delay: int = 0) -> None:
        """Schedule a local task at ``node``; not counted as a message."""
        self._push(self.now + delay, _LOCAL, Message(node, node, Kind.START, payload))

    def _deliver(self, msg: Message) -> None:
        box = self._inbox[msg.dst]
        if self.inbox_capacity is not None and len(box) >= self.inbox_capacity:
            self.rejections += 1
            key = id(msg)
            self.pending[msg.src][key] = msg
            self._push(self.now + self.retry_delay, _RETRY, msg)
            return
        self.pending[msg.src].pop(id(msg), None)
        box.append(msg)
        self._max_inbox[msg.dst] = max(self._max_inbox[msg.dst], len(box))
        if not self._busy[msg.dst]:
            self._busy[msg.dst] = True
            self._push(self.now + 1, _PROCESS, msg.dst)

    def _process(self, node: int) -> None:
        box = self._inbox[node]
        msg = box.popleft()
        self.delivered[msg.kind.value] += 1
        self.actors[node].handle(self, msg)
        if box:
            self._push(self.now + 1, _PROCESS, node)
        else:
            self._busy[node] = False

    def run_until_quiescent(self) -> SimStats:
        if self._running:
            raise SimulationError("simulation already running")
        start = self.now
        sent0, delivered0 = Counter(self.sent), Counter(self.delivered)
        rej0, ret0 = self.rejections, self.retries
        self._max_inbox = [0] * self.graph.n
        self._running = True
        try:
            while self._events:
                when, _, what, data = heapq.heappop(self._events)
                if when - start > self.tick_budget:
                    raise SimulationError("non-quiescent protocol")
                self.now = when
                if what == _DELIVER:
                    self._deliver(data)
                elif what == _PROCESS:
                    self._process(data)
                elif what == _RETRY:
                    self.retries += 1
                    self.sent[data.kind.value] += 1
                    self._push(self.now + 1, _DELIVER, data)
                else:
                    self.actors[data.dst].handle(self, data)
        finally:
            self._running = False
        return SimStats(
            sent=dict(self.sent - sent0),
            delivered=dict(self.delivered - delivered0),
            ticks=self.now - start,
            rejections=self.rejections - rej0,
            retries=self.retries - ret0,
            max_inbox=list(self._max_inbox),
        )
