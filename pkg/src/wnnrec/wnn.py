"""Weightless neural network agent.

A 3-layer recurrent state machine: n_I input bits feed n_Q = n_I inner
lookup-table neurons (each keyed on its own input bit, a few random other
input bits, and optionally its own previous state bit), whose joint state
keys n_Z output neurons. Neurons fire by table lookup: an exact key hit
answers with the stored tally's majority, a miss pools the k nearest
stored keys under Hamming or discrimination distance.

Learning appends key tallies instead of moving weights, so every training
event is a first-class, individually deletable record: the agent keeps a
registry of memory pairs, each table entry remembers which pairs touched
it, and deleting a pair decrements exactly the increments it caused.
Tables are always byte-identical to a from-scratch replay of the registry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitops import as_bits, pack
from .encoding import encode_rating, decode_rating, validate_rating
from .errors import FormatError, NotFoundError

EPSILON = 0.01  # discrimination-weight floor: no bit position is ever ignored

METRICS = ("hamming", "discrimination")


@dataclass(frozen=True)
class AgentConfig:
    """Architecture and inference knobs, fixed at agent creation.

    extra_fanin is the number of random additional input bits wired into
    each inner neuron beyond its own; it must leave enough distinct other
    inputs to draw from (extra_fanin <= input_size - 1).
    """

    input_size: int = 26
    output_size: int = 10
    extra_fanin: int = 4
    recurrent: bool = True
    metric: str = "hamming"
    k_nearest: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.input_size < 1 or self.output_size < 1:
            raise ValueError("input_size and output_size must be positive")
        if not 0 <= self.extra_fanin <= self.input_size - 1:
            raise ValueError("extra_fanin must be in [0, input_size - 1]")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.k_nearest < 1:
            raise ValueError("k_nearest must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def state_size(self) -> int:
        return self.input_size

    @property
    def q_key_width(self) -> int:
        return 1 + self.extra_fanin + (1 if self.recurrent else 0)


@dataclass(frozen=True)
class MemoryPair:
    """One stored training event: the unit of learning and of deletion."""

    id: int
    input: tuple[int, ...]
    target: float
    context_state: tuple[int, ...]
    timestamp: int


class _Entry:
    """Tally of training targets observed at one table key.

    pair_ids is kept ascending; its head (the earliest surviving
    contributor) defines the entry's canonical position in the table.
    """

    __slots__ = ("ones", "zeros", "pair_ids")

    def __init__(self):
        self.ones = 0
        self.zeros = 0
        self.pair_ids: list[int] = []


class LookupTable:
    """Key -> tally store for one neuron, ordered canonically.

    Entry order always equals first-appearance order in an id-ordered
    replay of the surviving memory pairs, so incrementally maintained
    tables are byte-identical to rebuilt ones and distance tie-breaks
    ("insertion order") survive deletion.
    """

    __slots__ = ("width", "_entries", "_version", "_weights_version", "_weights")

    def __init__(self, width: int):
        if width < 1:
            raise ValueError("key width must be positive")
        self.width = width
        self._entries: dict[int, _Entry] = {}
        self._version = 0
        self._weights_version = -1
        self._weights: list[float] = []

    def __len__(self) -> int:
        return len(self._entries)

    def increment(self, key: int, target_bit: int, pair_id: int) -> None:
        entry = self._entries.get(key)
        if entry is None:
            entry = self._entries[key] = _Entry()
        if target_bit:
            entry.ones += 1
        else:
            entry.zeros += 1
        entry.pair_ids.append(pair_id)
        entry.pair_ids.sort()
        self._version += 1

    def decrement(self, key: int, target_bit: int, pair_id: int) -> None:
        entry = self._entries[key]
        was_head = entry.pair_ids[0] == pair_id
        entry.pair_ids.remove(pair_id)
        if target_bit:
            entry.ones -= 1
        else:
            entry.zeros -= 1
        if entry.ones == 0 and entry.zeros == 0:
            del self._entries[key]
        elif was_head:
            # The earliest contributor changed: restore canonical order.
            self._entries = dict(sorted(self._entries.items(), key=lambda kv: kv[1].pair_ids[0]))
        self._version += 1

    def lookup(self, key: int, metric: str, k_nearest: int, default_bit: int) -> int:
        """Resolve a packed key to a bit per the exact-or-nearest rule."""
        if not self._entries:
            return default_bit
        exact = self._entries.get(key)
        if exact is not None:
            return self._majority(exact.ones, exact.zeros, default_bit)
        if metric == "hamming":
            scored = [
                ((key ^ stored).bit_count(), idx, entry)
                for idx, (stored, entry) in enumerate(self._entries.items())
            ]
        else:
            w = self._discrimination_weights()
            scored = []
            for idx, (stored, entry) in enumerate(self._entries.items()):
                diff = key ^ stored
                d = 0.0
                j = 0
                while diff:
                    if diff & 1:
                        d += w[j]
                    diff >>= 1
                    j += 1
                scored.append((d, idx, entry))
        scored.sort(key=lambda t: (t[0], t[1]))
        ones = zeros = 0
        for _, _, entry in scored[:k_nearest]:
            ones += entry.ones
            zeros += entry.zeros
        return self._majority(ones, zeros, default_bit)

    @staticmethod
    def _majority(ones: int, zeros: int, default_bit: int) -> int:
        if ones > zeros:
            return 1
        if zeros > ones:
            return 0
        return default_bit

    def _discrimination_weights(self) -> list[float]:
        """Per-bit weights |p_j(1) - p_j(0)| + EPSILON.

        p_j(c) is the frequency of bit j among stored keys whose tally
        majority is c; tied entries count toward neither class, an empty
        class contributes 0. Cached until the table mutates.
        """
        if self._weights_version == self._version:
            return self._weights
        n = [0, 0]
        bit_counts = [[0] * self.width, [0] * self.width]
        for stored, entry in self._entries.items():
            if entry.ones > entry.zeros:
                cls = 1
            elif entry.zeros > entry.ones:
                cls = 0
            else:
                continue
            n[cls] += 1
            for j in range(self.width):
                if (stored >> j) & 1:
                    bit_counts[cls][j] += 1
        weights = []
        for j in range(self.width):
            p1 = bit_counts[1][j] / n[1] if n[1] else 0.0
            p0 = bit_counts[0][j] / n[0] if n[0] else 0.0
            weights.append(abs(p1 - p0) + EPSILON)
        self._weights = weights
        self._weights_version = self._version
        return weights

    def snapshot(self) -> tuple:
        """Canonical content: ordered (key, ones, zeros, pair_ids) rows."""
        return tuple(
            (key, e.ones, e.zeros, tuple(e.pair_ids)) for key, e in self._entries.items()
        )


def lookup_bit(
    table: LookupTable,
    key: Sequence[int] | np.ndarray,
    metric: str = "hamming",
    k_nearest: int = 3,
    default_bit: int = 0,
) -> int:
    """Look up a bit-vector key in a table (width-checked public entry)."""
    bits = as_bits(key)
    if bits.size != table.width:
        raise ValueError(f"key has {bits.size} bits, table width is {table.width}")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    return table.lookup(pack(bits), metric, k_nearest, default_bit)


class Agent:
    """A WNN instance: connectivity, tables, context state, memory registry.

    Mutable single-writer state machine; distinct agents are independent.
    """

    def __init__(self, config: AgentConfig):
        self.config = config
        n = config.input_size
        rng = np.random.default_rng(config.seed)
        self.connections: list[list[int]] = []
        for i in range(n):
            others = [j for j in range(n) if j != i]
            drawn = rng.choice(others, size=config.extra_fanin, replace=False) if config.extra_fanin else []
            self.connections.append([i] + [int(j) for j in drawn])
        self.q_tables = [LookupTable(config.q_key_width) for _ in range(n)]
        self.z_tables = [LookupTable(n) for _ in range(config.output_size)]
        self._prev_state = np.zeros(n, dtype=np.uint8)
        self.memory: dict[int, MemoryPair] = {}
        self._next_id = 1
        self._clock = 0

    # -- state -----------------------------------------------------------

    @property
    def prev_state(self) -> np.ndarray:
        return self._prev_state.copy()

    def reset_state(self) -> None:
        """Zero the recurrent context (idempotent)."""
        self._prev_state = np.zeros(self.config.input_size, dtype=np.uint8)

    def _q_key(self, i: int, input_bits: np.ndarray, context: Sequence[int]) -> int:
        key = 0
        for pos, src in enumerate(self.connections[i]):
            if input_bits[src]:
                key |= 1 << pos
        if self.config.recurrent and context[i]:
            key |= 1 << len(self.connections[i])
        return key

    def next_state(self, input_bits: Sequence[int] | np.ndarray) -> np.ndarray:
        """Advance the inner state one step and return it.

        Each inner neuron resolves its (input bits, own previous bit) key;
        on an empty table it passes its own input bit through.
        """
        x = as_bits(input_bits, self.config.input_size)
        cfg = self.config
        out = np.empty(cfg.input_size, dtype=np.uint8)
        for i in range(cfg.input_size):
            key = self._q_key(i, x, self._prev_state)
            out[i] = self.q_tables[i].lookup(key, cfg.metric, cfg.k_nearest, int(x[i]))
        self._prev_state = out
        return out.copy()

    def predict(self, input_bits: Sequence[int] | np.ndarray) -> tuple[float, np.ndarray]:
        """Advance state on the input and read the output neurons.

        Returns (decoded rating, raw 10-bit output vector). Output neurons
        default to 0, so a fresh agent predicts the clamped minimum 0.5.
        """
        cfg = self.config
        state = self.next_state(input_bits)
        state_key = pack(state)
        z = np.empty(cfg.output_size, dtype=np.uint8)
        for j in range(cfg.output_size):
            z[j] = self.z_tables[j].lookup(state_key, cfg.metric, cfg.k_nearest, 0)
        return decode_rating(z), z

    def predict_stateless(self, input_bits: Sequence[int] | np.ndarray) -> tuple[float, np.ndarray]:
        """reset_state + predict, then restore the previous context.

        Read-only from the caller's perspective: predictions depend only
        on the memory registry, never on query order.
        """
        saved = self._prev_state
        self.reset_state()
        try:
            return self.predict(input_bits)
        finally:
            self._prev_state = saved

    # -- learning --------------------------------------------------------

    def train(
        self,
        input_bits: Sequence[int] | np.ndarray,
        target: float,
        timestamp: int | None = None,
    ) -> int:
        """Store one (input, rating) pair and fold it into the tables.

        The pair records the pre-call context so it can be replayed or
        deleted exactly. Returns the new pair id. Timestamps default to a
        logical counter so behavior stays reproducible; callers may pass
        wall-clock values.
        """
        x = as_bits(input_bits, self.config.input_size)
        validate_rating(target)
        self._clock += 1
        pair = MemoryPair(
            id=self._next_id,
            input=tuple(int(b) for b in x),
            target=float(target),
            context_state=tuple(int(b) for b in self._prev_state),
            timestamp=self._clock if timestamp is None else int(timestamp),
        )
        self._next_id += 1
        self.memory[pair.id] = pair
        self._apply(pair, add=True)
        # The post-update inner state is the input itself: a q-key's first
        # source bit is the neuron's own input bit, which is also the
        # training target, so tallies at any q-key are unanimous and the
        # exact-match lookup returns that bit.
        self._prev_state = x.copy()
        return pair.id

    def _pair_keys(self, pair: MemoryPair) -> tuple[list[int], int]:
        x = np.asarray(pair.input, dtype=np.uint8)
        q_keys = [self._q_key(i, x, pair.context_state) for i in range(self.config.input_size)]
        return q_keys, pack(pair.input)

    def _apply(self, pair: MemoryPair, add: bool) -> None:
        q_keys, z_key = self._pair_keys(pair)
        for i, key in enumerate(q_keys):
            if add:
                self.q_tables[i].increment(key, pair.input[i], pair.id)
            else:
                self.q_tables[i].decrement(key, pair.input[i], pair.id)
        target_bits = encode_rating(pair.target)
        for j in range(self.config.output_size):
            if add:
                self.z_tables[j].increment(z_key, int(target_bits[j]), pair.id)
            else:
                self.z_tables[j].decrement(z_key, int(target_bits[j]), pair.id)

    def list_memory(self) -> list[MemoryPair]:
        """All stored pairs in insertion (= ascending id) order."""
        return list(self.memory.values())

    def delete_pair(self, pair_id: int) -> None:
        """Remove one pair and revert exactly its table increments."""
        pair = self.memory.pop(pair_id, None)
        if pair is None:
            raise NotFoundError(f"no memory pair with id {pair_id}")
        self._apply(pair, add=False)

    def rebuild_tables(self) -> None:
        """Replay the registry into fresh tables (the canonical form)."""
        cfg = self.config
        self.q_tables = [LookupTable(cfg.q_key_width) for _ in range(cfg.input_size)]
        self.z_tables = [LookupTable(cfg.input_size) for _ in range(cfg.output_size)]
        for pair in self.memory.values():
            self._apply(pair, add=True)

    def tables_snapshot(self) -> tuple:
        """Canonical content of every table, for equality checks."""
        return (
            tuple(t.snapshot() for t in self.q_tables),
            tuple(t.snapshot() for t in self.z_tables),
        )


def new_agent(config: AgentConfig) -> Agent:
    """Create an empty agent; connectivity is a pure function of the seed."""
    return Agent(config)


def save_agent(agent: Agent) -> str:
    """Serialize an agent to a versioned JSON snapshot.

    Tables are not stored; they are rebuilt from the memory registry on
    load, which guarantees the canonical form.
    """
    doc = {
        "version": "agent-v1",
        "config": {
            "input_size": agent.config.input_size,
            "output_size": agent.config.output_size,
            "extra_fanin": agent.config.extra_fanin,
            "recurrent": agent.config.recurrent,
            "metric": agent.config.metric,
            "k_nearest": agent.config.k_nearest,
            "seed": agent.config.seed,
        },
        "connections": [list(c) for c in agent.connections],
        "memory": [
            {
                "id": p.id,
                "input": list(p.input),
                "target": p.target,
                "context_state": list(p.context_state),
                "timestamp": p.timestamp,
            }
            for p in agent.memory.values()
        ],
        "prev_state": [int(b) for b in agent.prev_state],
        "next_id": agent._next_id,
        "clock": agent._clock,
    }
    return json.dumps(doc)


def load_agent(text: str) -> Agent:
    """Rebuild an agent from a snapshot produced by :func:`save_agent`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"agent snapshot is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("version") != "agent-v1":
        raise FormatError("expected an agent-v1 document")
    try:
        config = AgentConfig(**doc["config"])
        agent = Agent(config)
        connections = [[int(j) for j in conn] for conn in doc["connections"]]
        if len(connections) != config.input_size or any(
            len(conn) != 1 + config.extra_fanin
            or conn[0] != i
            or len(set(conn)) != len(conn)
            or any(not 0 <= j < config.input_size for j in conn)
            for i, conn in enumerate(connections)
        ):
            raise FormatError("connection map inconsistent with config")
        agent.connections = connections
        for row in doc["memory"]:
            pair = MemoryPair(
                id=int(row["id"]),
                input=tuple(int(b) for b in row["input"]),
                target=validate_rating(row["target"]),
                context_state=tuple(int(b) for b in row["context_state"]),
                timestamp=int(row["timestamp"]),
            )
            if len(pair.input) != config.input_size or len(pair.context_state) != config.input_size:
                raise FormatError(f"memory pair {pair.id} has wrong bit widths")
            if pair.id in agent.memory:
                raise FormatError(f"duplicate memory pair id {pair.id}")
            agent.memory[pair.id] = pair
        agent._prev_state = as_bits(doc["prev_state"], config.input_size)
        agent._next_id = int(doc["next_id"])
        agent._clock = int(doc["clock"])
        if agent.memory and agent._next_id <= max(agent.memory):
            raise FormatError("next_id collides with stored pair ids")
        agent.rebuild_tables()
        return agent
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad agent snapshot: {e}") from e
