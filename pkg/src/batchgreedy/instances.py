"""Instance files (canonical JSON) and the seeded instance generator.

Schema::

    {"ground": {"size": N, "labels": [...]},          # labels optional
     "objective": {"task_assignment": {"p": [[...N floats...], ...]}}   # n rows
                | {"additive": {"w": [...N floats...]}}
                | {"table": {"values": [...2^N floats...]}},  # bit j = element j
     "matroid": {"uniform": {"K": int}}
              | {"partition": {"blocks": [[int, ...], ...], "capacities": [int, ...]}}
              | {"explicit": {"maximal_sets": [[int, ...], ...]}}}

The generator is SplitMix64, so any implementation can reproduce the same
instances from the same seed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations, product
from pathlib import Path

from .errors import BatchGreedyError, InstanceFormatError, PreconditionError
from .objectives import Additive, SetFunction, Table, TaskAssignment
from .setsystem import (
    ExplicitMatroid,
    GroundSet,
    Matroid,
    PartitionMatroid,
    Subset,
    UniformMatroid,
)

MASK64 = (1 << 64) - 1
P_LOW, P_HIGH = 0.05, 0.95
MATROID_KINDS = ("uniform", "partition", "explicit")


class SplitMix64:
    """SplitMix64 stream (Steele, Lea & Flood constants)."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] by reduction modulo the range width."""
        return lo + self.next_u64() % (hi - lo + 1)

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]
        return items


@dataclass(eq=False)
class Instance:
    ground: GroundSet
    objective: SetFunction
    matroid: Matroid

    def to_dict(self) -> dict:
        g = {"size": self.ground.size}
        if self.ground.labels is not None:
            g["labels"] = list(self.ground.labels)
        return {"ground": g, "objective": self.objective.to_dict(), "matroid": self.matroid.to_dict()}

    def __eq__(self, other):
        return isinstance(other, Instance) and self.to_dict() == other.to_dict()

    def digest(self) -> str:
        return hashlib.sha256(dumps(self).encode()).hexdigest()


def dumps(instance: Instance) -> str:
    return json.dumps(instance.to_dict(), sort_keys=True, indent=2) + "\n"


def save(instance: Instance, path) -> None:
    Path(path).write_text(dumps(instance))


def _fail(path, msg):
    raise InstanceFormatError(f"{path}: {msg}")


def _one_of(d, path, options):
    if not isinstance(d, dict) or len(d) != 1:
        _fail(path, f"expected an object with exactly one of {sorted(options)}")
    (key, val), = d.items()
    if key not in options:
        _fail(path, f"unknown kind {key!r}; expected one of {sorted(options)}")
    if not isinstance(val, dict):
        _fail(f"{path}.{key}", "expected an object")
    return key, val


def _field(d, key, path):
    if key not in d:
        _fail(path, f"missing field {key!r}")
    return d[key]


def _numbers(seq, path, length=None):
    if not isinstance(seq, list):
        _fail(path, "expected a list")
    if length is not None and len(seq) != length:
        _fail(path, f"expected {length} entries, got {len(seq)}")
    for i, x in enumerate(seq):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            _fail(f"{path}[{i}]", f"expected a number, got {x!r}")
    return [float(x) for x in seq]


def _int_list(seq, path, n):
    if not isinstance(seq, list):
        _fail(path, "expected a list")
    for i, x in enumerate(seq):
        if isinstance(x, bool) or not isinstance(x, int):
            _fail(f"{path}[{i}]", f"expected an integer, got {x!r}")
        if not 0 <= x < n:
            _fail(f"{path}[{i}]", f"element {x} outside 0..{n - 1}")
    if len(set(seq)) != len(seq):
        _fail(path, "duplicate element")
    return Subset.from_indices(seq)


def from_dict(data: dict) -> Instance:
    """Build an instance, validating every field; errors name the field path."""
    if not isinstance(data, dict):
        _fail("$", "expected a JSON object")
    g = _field(data, "ground", "$")
    if not isinstance(g, dict):
        _fail("ground", "expected an object")
    size = _field(g, "size", "ground")
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        _fail("ground.size", f"expected a positive integer, got {size!r}")
    labels = g.get("labels")
    try:
        ground = GroundSet(size, tuple(labels) if labels is not None else None)
    except PreconditionError as e:
        _fail("ground.labels", str(e))

    kind, obj = _one_of(_field(data, "objective", "$"), "objective", ("task_assignment", "additive", "table"))
    path = f"objective.{kind}"
    if kind == "task_assignment":
        rows = _field(obj, "p", path)
        if not isinstance(rows, list) or not rows:
            _fail(f"{path}.p", "expected a nonempty list of rows")
        p = [_numbers(r, f"{path}.p[{i}]", size) for i, r in enumerate(rows)]
        for i, row in enumerate(p):
            for j, x in enumerate(row):
                if not 0 < x <= 1:
                    _fail(f"{path}.p[{i}][{j}]", f"probability {x} outside (0, 1]")
        objective = TaskAssignment(p, ground)
    elif kind == "additive":
        w = _numbers(_field(obj, "w", path), f"{path}.w", size)
        for j, x in enumerate(w):
            if not 0 <= x < float("inf"):
                _fail(f"{path}.w[{j}]", f"weight {x} must be finite and nonnegative")
        objective = Additive(w, ground)
    else:
        if size > 24:
            _fail("ground.size", "table objectives need N <= 24")
        vals = _numbers(_field(obj, "values", path), f"{path}.values", 1 << size)
        for j, x in enumerate(vals):
            if not 0 <= x < float("inf"):
                _fail(f"{path}.values[{j}]", f"value {x} must be finite and nonnegative")
        if vals[0] != 0:
            _fail(f"{path}.values[0]", "value of the empty set must be 0")
        objective = Table(vals, ground)

    kind, mat = _one_of(_field(data, "matroid", "$"), "matroid", MATROID_KINDS)
    path = f"matroid.{kind}"
    try:
        if kind == "uniform":
            K = _field(mat, "K", path)
            if isinstance(K, bool) or not isinstance(K, int):
                _fail(f"{path}.K", f"expected an integer, got {K!r}")
            matroid = UniformMatroid(ground, K)
        elif kind == "partition":
            blocks = _field(mat, "blocks", path)
            caps = _field(mat, "capacities", path)
            if not isinstance(blocks, list) or not isinstance(caps, list):
                _fail(path, "blocks and capacities must be lists")
            bs = [_int_list(b, f"{path}.blocks[{i}]", size) for i, b in enumerate(blocks)]
            for i, c in enumerate(caps):
                if isinstance(c, bool) or not isinstance(c, int):
                    _fail(f"{path}.capacities[{i}]", f"expected an integer, got {c!r}")
            matroid = PartitionMatroid(ground, bs, caps)
        else:
            sets = _field(mat, "maximal_sets", path)
            if not isinstance(sets, list):
                _fail(f"{path}.maximal_sets", "expected a list")
            ms = [_int_list(s, f"{path}.maximal_sets[{i}]", size) for i, s in enumerate(sets)]
            matroid = ExplicitMatroid(ground, ms)
    except PreconditionError as e:
        _fail(path, str(e))
    return Instance(ground, objective, matroid)


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_dict(data)


def load(path) -> Instance:
    return loads(Path(path).read_text())


def _probability(rng: SplitMix64) -> float:
    return round(P_LOW + (P_HIGH - P_LOW) * rng.uniform(), 6)


def generate_instance(seed: int, n: int, N: int, K: int, kind: str = "uniform") -> Instance:
    """Deterministic task-assignment instance.

    Draw order: the ``n x N`` probabilities row by row, each
    ``round(0.05 + 0.9 * u, 6)``; then, for partition and explicit kinds,
    a Fisher-Yates shuffle of the elements, a block count ``b`` in
    ``1..min(K, N)``, round-robin block assignment of the shuffled elements,
    and ``K`` capacity units each given to a uniformly chosen block that
    still has room.  Explicit instances list every basis of that partition
    matroid.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    if not 1 <= K <= N:
        raise PreconditionError(f"K must lie in 1..{N}, got {K}")
    if kind not in MATROID_KINDS:
        raise PreconditionError(f"matroid kind must be one of {MATROID_KINDS}, got {kind!r}")
    rng = SplitMix64(seed)
    ground = GroundSet(N)
    p = [[_probability(rng) for _ in range(N)] for _ in range(n)]
    objective = TaskAssignment(p, ground)
    if kind == "uniform":
        return Instance(ground, objective, UniformMatroid(ground, K))

    order = rng.shuffle(list(range(N)))
    b = rng.randint(1, min(K, N))
    members = [sorted(order[i::b]) for i in range(b)]
    caps = [0] * b
    for _ in range(K):
        room = [i for i in range(b) if caps[i] < len(members[i])]
        caps[room[rng.randint(0, len(room) - 1)]] += 1
    blocks = [Subset.from_indices(ms) for ms in members]
    partition = PartitionMatroid(ground, blocks, caps)
    if kind == "partition":
        return Instance(ground, objective, partition)

    bases = []
    for parts in product(*(combinations(ms, c) for ms, c in zip(members, caps))):
        bases.append(Subset.from_indices(j for part in parts for j in part))
    bases.sort(key=Subset.sort_key)
    return Instance(ground, objective, ExplicitMatroid(ground, bases))


__all__ = [
    "SplitMix64",
    "Instance",
    "dumps",
    "loads",
    "load",
    "save",
    "from_dict",
    "generate_instance",
    "BatchGreedyError",
]
