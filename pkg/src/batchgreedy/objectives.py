"""Set-function oracles and exhaustive monotonicity/submodularity certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EXHAUSTIVE_LIMIT, PreconditionError, check_exhaustive
from .setsystem import EMPTY, GroundSet, Subset, all_masks

#: Absolute tolerance used when comparing objective values in checkers.
TOL = 1e-9

_CHUNK = 1 << 16
# small ground sets are tabulated on first scalar evaluation
_AUTO_TABLE = 16


class SetFunction:
    """Normalized set function ``f: 2^X -> R+`` with ``f(empty) = 0``.

    Subclasses provide ``_values`` (vectorized evaluation over an int64 mask
    array).  The full value table is built lazily and cached; building it twice
    under a race is harmless since the result is identical.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._table: Optional[np.ndarray] = None

    def __call__(self, s: Subset) -> float:
        return self.evaluate(s)

    def evaluate(self, s: Subset) -> float:
        self.ground.check(s)
        return self.value(s.mask)

    def value(self, mask: int) -> float:
        if self._table is None and self.ground.size <= _AUTO_TABLE:
            self.table()
        if self._table is not None:
            return float(self._table[mask])
        return float(self._values(np.array([mask], dtype=np.int64))[0])

    def values(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        if self._table is not None:
            return self._table[masks]
        if len(masks) <= _CHUNK:
            return self._values(masks)
        return np.concatenate(
            [self._values(masks[i : i + _CHUNK]) for i in range(0, len(masks), _CHUNK)]
        )

    def table(self) -> np.ndarray:
        """Values of all 2^N subsets, indexed by bitmask."""
        if self._table is None:
            self._table = self.values(all_masks(self.ground.size))
        return self._table

    def _values(self, masks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _bits(self, masks: np.ndarray) -> np.ndarray:
        shifts = np.arange(self.ground.size, dtype=np.int64)
        return ((masks[:, None] >> shifts) & 1).astype(bool)

    def to_dict(self) -> dict:
        raise NotImplementedError


class TaskAssignment(SetFunction):
    """Expected fraction of ``n`` subtasks accomplished by a set of agents.

    ``p[i, j]`` is the probability that agent ``j`` accomplishes subtask ``i``;
    entries must lie in (0, 1].
    """

    kind = "task_assignment"

    def __init__(self, p, ground: Optional[GroundSet] = None):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise PreconditionError("p must be a nonempty n x N matrix")
        if not np.all(np.isfinite(p)) or np.any(p <= 0) or np.any(p > 1):
            raise PreconditionError("every success probability must lie in (0, 1]")
        if ground is None:
            ground = GroundSet(p.shape[1])
        elif ground.size != p.shape[1]:
            raise PreconditionError(f"p has {p.shape[1]} columns but N = {ground.size}")
        super().__init__(ground)
        self.p = p
        self.p.setflags(write=False)

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def _values(self, masks):
        bits = self._bits(masks)
        q = 1.0 - self.p
        total = np.zeros(len(masks))
        for i in range(self.n):
            total += 1.0 - np.where(bits, q[i], 1.0).prod(axis=1)
        return total / self.n

    def to_dict(self):
        return {"task_assignment": {"p": self.p.tolist()}}


class Additive(SetFunction):
    kind = "additive"

    def __init__(self, w, ground: Optional[GroundSet] = None):
        w = np.asarray(w, dtype=float).ravel()
        if len(w) < 1:
            raise PreconditionError("need at least one weight")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise PreconditionError("weights must be finite and nonnegative")
        if ground is None:
            ground = GroundSet(len(w))
        elif ground.size != len(w):
            raise PreconditionError(f"{len(w)} weights but N = {ground.size}")
        super().__init__(ground)
        self.w = w
        self.w.setflags(write=False)

    def _values(self, masks):
        return self._bits(masks) @ self.w

    def to_dict(self):
        return {"additive": {"w": self.w.tolist()}}


class Table(SetFunction):
    """Explicit value table; bit ``j`` of the index is element ``j``."""

    kind = "table"

    def __init__(self, values, ground: Optional[GroundSet] = None):
        values = np.asarray(values, dtype=float).ravel()
        n = len(values).bit_length() - 1
        if len(values) < 2 or len(values) != 1 << n:
            raise PreconditionError(f"table needs 2^N entries, got {len(values)}")
        check_exhaustive(n)
        if ground is None:
            ground = GroundSet(n)
        elif ground.size != n:
            raise PreconditionError(f"table has 2^{n} entries but N = {ground.size}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise PreconditionError("table values must be finite and nonnegative")
        if values[0] != 0:
            raise PreconditionError("table value of the empty set must be 0")
        super().__init__(ground)
        values.setflags(write=False)
        self._table = values

    def _values(self, masks):
        return self._table[masks]

    def to_dict(self):
        return {"table": {"values": self._table.tolist()}}


def evaluate(f: SetFunction, s: Subset) -> float:
    return f.evaluate(s)


@dataclass(frozen=True)
class MarginalGain:
    base: Subset
    added: Subset
    value: float


def marginal(f: SetFunction, base: Subset, added: Subset) -> MarginalGain:
    """Gain ``f(base | added) - f(base)``; ``base`` and ``added`` must be disjoint."""
    f.ground.check(base)
    f.ground.check(added)
    if not base.isdisjoint(added):
        raise PreconditionError(f"{added!r} overlaps the base set {base!r}")
    return MarginalGain(base, added, gain(f, base.mask, added.mask))


def gain(f: SetFunction, base: int, added: int) -> float:
    """Unchecked marginal gain on raw masks (overlap allowed)."""
    return f.value(base | added) - f.value(base)


@dataclass(frozen=True)
class Certificate:
    nondecreasing: bool
    submodular: bool
    witness: Optional[tuple[Subset, Subset, int]] = None
    mode: str = "exhaustive"
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.nondecreasing and self.submodular

    def to_dict(self):
        w = self.witness
        return {
            "nondecreasing": self.nondecreasing,
            "submodular": self.submodular,
            "mode": self.mode,
            "checked": self.checked,
            "witness": None if w is None else [list(w[0].members), list(w[1].members), w[2]],
        }


def certify_monotone_submodular(
    f: SetFunction, tol: float = TOL, samples: Optional[int] = None, seed: int = 0
) -> Certificate:
    """Certify that ``f`` is nondecreasing and submodular.

    For ``N <= 24`` the check is exhaustive in the local form
    ``f(A + j) >= f(A)`` and ``gain_j(A) >= gain_j(A + i)``, which is
    equivalent to the pairwise definitions by telescoping.  The witness is
    the violating ``(A, B, j)`` that is smallest in ``(A, B, j)`` mask order.
    Larger ground sets need ``samples`` and are checked on random triples.
    """
    n = f.ground.size
    if n > EXHAUSTIVE_LIMIT:
        if samples is None:
            raise PreconditionError(
                f"N = {n} is too large for an exhaustive certificate; pass samples="
            )
        return _sampled_certificate(f, tol, samples, seed)

    table = f.table()
    masks = all_masks(n)
    best = None
    for j in range(n):
        bit = 1 << j
        out = masks[(masks & bit) == 0]
        gains = table[out | bit] - table[out]
        bad = gains < -tol
        if bad.any():
            a = int(out[np.argmax(bad)])
            cand = (a, a | bit, j)
            best = cand if best is None or cand < best else best
    monotone = best is None
    mono_witness = best

    best = None
    for j in range(n):
        bj = 1 << j
        for i in range(n):
            if i == j:
                continue
            bi = 1 << i
            base = masks[(masks & (bi | bj)) == 0]
            g_small = table[base | bj] - table[base]
            g_big = table[base | bi | bj] - table[base | bi]
            bad = g_small < g_big - tol
            if bad.any():
                a = int(base[np.argmax(bad)])
                cand = (a, a | bi, j)
                best = cand if best is None or cand < best else best
    submodular = best is None
    witness = mono_witness if mono_witness is not None else best
    if witness is not None:
        witness = (Subset(witness[0]), Subset(witness[1]), witness[2])
    checked = n * (1 << max(n - 1, 0)) + n * (n - 1) * (1 << max(n - 2, 0))
    return Certificate(monotone, submodular, witness, "exhaustive", checked)


def _sampled_certificate(f, tol, samples, seed):
    rng = np.random.default_rng(seed)
    n = f.ground.size
    monotone = submodular = True
    witness = None
    for _ in range(samples):
        b_bits = rng.random(n) < 0.5
        j = int(rng.integers(n))
        b_bits[j] = False
        a_bits = b_bits & (rng.random(n) < 0.5)
        a = Subset.from_indices(np.flatnonzero(a_bits))
        b = Subset.from_indices(np.flatnonzero(b_bits))
        bj = Subset(1 << j)
        if f(b) < f(a) - tol:
            monotone = False
            witness = witness or (a, b, j)
        if gain(f, a.mask, bj.mask) < gain(f, b.mask, bj.mask) - tol:
            submodular = False
            witness = witness or (a, b, j)
    return Certificate(monotone, submodular, witness, "sampled", samples)


__all__ = [
    "SetFunction",
    "TaskAssignment",
    "Additive",
    "Table",
    "MarginalGain",
    "Certificate",
    "evaluate",
    "marginal",
    "gain",
    "certify_monotone_submodular",
    "EMPTY",
    "TOL",
]
