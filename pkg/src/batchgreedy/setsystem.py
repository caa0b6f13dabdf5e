"""Ground sets, bitmask subsets and matroid independence oracles.

Subsets are stored as Python ints (bit ``j`` set means element ``j`` is a
member), which keeps them hashable, immutable and cheap to combine.  Bulk
operations over the whole power set use numpy arrays of masks instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    MalformedSubsetError,
    PreconditionError,
    check_budget,
    check_exhaustive,
)


@dataclass(frozen=True)
class Subset:
    """A finite set of element indices with bitmask semantics."""

    mask: int = 0

    def __post_init__(self):
        if self.mask < 0:
            raise MalformedSubsetError("subset mask must be nonnegative")

    @classmethod
    def of(cls, *indices: int) -> "Subset":
        return cls.from_indices(indices)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "Subset":
        mask = 0
        for j in indices:
            j = int(j)
            if j < 0:
                raise MalformedSubsetError(f"negative element index {j}")
            bit = 1 << j
            if mask & bit:
                raise MalformedSubsetError(f"duplicate element index {j}")
            mask |= bit
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        out = []
        m = self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, j: object) -> bool:
        return isinstance(j, (int, np.integer)) and j >= 0 and bool(self.mask >> int(j) & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.mask & other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        return Subset(self.mask & ~other.mask)

    def add(self, j: int) -> "Subset":
        return Subset(self.mask | (1 << j))

    def issubset(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Subset") -> bool:
        return self.mask & other.mask == 0

    def sort_key(self) -> tuple[int, ...]:
        """Key for the lexicographic order on sorted index tuples."""
        return self.members

    def __repr__(self) -> str:
        return "Subset({" + ", ".join(map(str, self.members)) + "})"


EMPTY = Subset(0)


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if int(self.size) < 1:
            raise PreconditionError(f"ground set size must be >= 1, got {self.size}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.size:
                raise PreconditionError(
                    f"expected {self.size} labels, got {len(labels)}"
                )
            if len(set(labels)) != len(labels):
                raise PreconditionError("labels must be distinct")
            object.__setattr__(self, "labels", labels)

    @property
    def full(self) -> Subset:
        return Subset((1 << self.size) - 1)

    def check(self, s: Subset) -> Subset:
        """Raise MalformedSubsetError unless every member of ``s`` is < size."""
        if not isinstance(s, Subset):
            raise MalformedSubsetError(f"expected a Subset, got {type(s).__name__}")
        if s.mask >> self.size:
            raise MalformedSubsetError(
                f"{s!r} has indices outside the ground set 0..{self.size - 1}"
            )
        return s

    def subset(self, indices: Iterable[int]) -> Subset:
        return self.check(Subset.from_indices(indices))


def all_masks(n: int) -> np.ndarray:
    check_exhaustive(n)
    return np.arange(1 << n, dtype=np.int64)


def popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)


class Matroid:
    """Independence oracle over a ground set.

    Subclasses implement ``_independent`` (single mask) and
    ``_independent_array`` (vectorized over many masks).
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet):
        self.ground = ground

    def is_independent(self, s: Subset) -> bool:
        self.ground.check(s)
        return self._independent(s.mask)

    def independent_masks(self, masks: np.ndarray) -> np.ndarray:
        return self._independent_array(np.asarray(masks, dtype=np.int64))

    def rank_upper(self) -> int:
        raise NotImplementedError

    def _independent(self, mask: int) -> bool:
        raise NotImplementedError

    def _independent_array(self, masks: np.ndarray) -> np.ndarray:
        return np.fromiter((self._independent(int(m)) for m in masks), bool, len(masks))

    def to_dict(self) -> dict:
        raise NotImplementedError


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, ground: GroundSet, rank: int):
        super().__init__(ground)
        rank = int(rank)
        if not 1 <= rank <= ground.size:
            raise PreconditionError(f"uniform rank must lie in 1..{ground.size}, got {rank}")
        self.rank = rank

    def rank_upper(self) -> int:
        return self.rank

    def _independent(self, mask: int) -> bool:
        return mask.bit_count() <= self.rank

    def _independent_array(self, masks):
        return popcount(masks) <= self.rank

    def to_dict(self):
        return {"uniform": {"K": self.rank}}

    def __repr__(self):
        return f"UniformMatroid(N={self.ground.size}, K={self.rank})"


class PartitionMatroid(Matroid):
    kind = "partition"

    def __init__(self, ground: GroundSet, blocks: Sequence[Subset], capacities: Sequence[int]):
        super().__init__(ground)
        blocks = tuple(ground.check(b) for b in blocks)
        capacities = tuple(int(c) for c in capacities)
        if len(blocks) != len(capacities):
            raise PreconditionError("need exactly one capacity per block")
        seen = 0
        for b, c in zip(blocks, capacities):
            if seen & b.mask:
                raise PreconditionError(f"block {b!r} overlaps an earlier block")
            seen |= b.mask
            if not 0 <= c <= len(b):
                raise PreconditionError(f"capacity {c} outside 0..{len(b)} for block {b!r}")
        if seen != ground.full.mask:
            raise PreconditionError("blocks must cover the ground set")
        self.blocks = blocks
        self.capacities = capacities

    def rank_upper(self) -> int:
        return sum(self.capacities)

    def _independent(self, mask: int) -> bool:
        return all((mask & b.mask).bit_count() <= c for b, c in zip(self.blocks, self.capacities))

    def _independent_array(self, masks):
        ok = np.ones(len(masks), dtype=bool)
        for b, c in zip(self.blocks, self.capacities):
            ok &= popcount(masks & b.mask) <= c
        return ok

    def to_dict(self):
        return {
            "partition": {
                "blocks": [list(b.members) for b in self.blocks],
                "capacities": list(self.capacities),
            }
        }

    def __repr__(self):
        return f"PartitionMatroid(blocks={list(self.blocks)}, capacities={list(self.capacities)})"


class ExplicitMatroid(Matroid):
    """Independence system given by its maximal sets.

    Matroid axioms are not assumed; use :func:`check_matroid_axioms`.
    """

    kind = "explicit"

    def __init__(self, ground: GroundSet, maximal_sets: Sequence[Subset]):
        super().__init__(ground)
        sets = tuple(ground.check(s) for s in maximal_sets)
        if not sets:
            raise PreconditionError("explicit system needs at least one maximal set")
        for a in sets:
            for b in sets:
                if a is not b and a.issubset(b):
                    raise PreconditionError(f"maximal set {a!r} is contained in {b!r}")
        self.maximal_sets = sets

    def rank_upper(self) -> int:
        return max(len(s) for s in self.maximal_sets)

    def equicardinal(self) -> bool:
        """True when all maximal sets share one size (needed by the batch bounds)."""
        return len({len(s) for s in self.maximal_sets}) == 1

    def _independent(self, mask: int) -> bool:
        return any(mask & ~s.mask == 0 for s in self.maximal_sets)

    def _independent_array(self, masks):
        ok = np.zeros(len(masks), dtype=bool)
        for s in self.maximal_sets:
            ok |= (masks & ~s.mask) == 0
        return ok

    def to_dict(self):
        return {"explicit": {"maximal_sets": [list(s.members) for s in self.maximal_sets]}}

    def __repr__(self):
        return f"ExplicitMatroid(maximal_sets={list(self.maximal_sets)})"


def is_independent(m: Matroid, s: Subset) -> bool:
    return m.is_independent(s)


def rank_upper(m: Matroid) -> int:
    return m.rank_upper()


@dataclass(frozen=True)
class AxiomReport:
    hereditary: bool
    augmentation: bool
    witness: Optional[tuple[Subset, Subset]] = None
    equicardinal: bool = True

    @property
    def ok(self) -> bool:
        return self.hereditary and self.augmentation

    def to_dict(self):
        return {
            "hereditary": self.hereditary,
            "augmentation": self.augmentation,
            "equicardinal": self.equicardinal,
            "witness": None if self.witness is None else [list(s.members) for s in self.witness],
        }


def check_matroid_axioms(m: Matroid, budget=None) -> AxiomReport:
    """Exhaustively test heredity and augmentation.

    Heredity is checked in its single-deletion form and augmentation on pairs
    with ``|B| = |A| + 1``; both are equivalent to the full axioms.  The
    witness is the first violating pair in ascending mask order: ``(A, B)``
    with ``A`` dependent and ``B`` independent for heredity, or the pair that
    cannot be augmented.
    """
    n = m.ground.size
    masks = all_masks(n)
    indep = m.independent_masks(masks)

    witness = _hereditary_witness(masks, indep, n)
    if witness is not None:
        return AxiomReport(False, True, witness, _equicardinal(m))

    ind = masks[indep]
    sizes = popcount(ind)
    check_budget(len(ind) ** 2, budget, "independent-set pairs")
    by_size = {s: ind[sizes == s] for s in np.unique(sizes)}
    for a in ind:
        a = int(a)
        bigger = by_size.get(a.bit_count() + 1)
        if bigger is None:
            continue
        ext = 0
        for j in range(n):
            bit = 1 << j
            if not a & bit and m._independent(a | bit):
                ext |= bit
        bad = (bigger & ~a & ext) == 0
        if bad.any():
            b = int(bigger[np.argmax(bad)])
            return AxiomReport(True, False, (Subset(a), Subset(b)), _equicardinal(m))
    return AxiomReport(True, True, None, _equicardinal(m))


def _hereditary_witness(masks, indep, n):
    best = None
    for j in range(n):
        bit = 1 << j
        bad = indep & ((masks & bit) != 0) & ~indep[masks & ~bit]
        if bad.any():
            b = int(masks[np.argmax(bad)])
            cand = (b & ~bit, b)
            if best is None or cand < best:
                best = cand
    return None if best is None else (Subset(best[0]), Subset(best[1]))


def _equicardinal(m: Matroid) -> bool:
    if isinstance(m, ExplicitMatroid):
        return m.equicardinal()
    return True


def enumerate_k_subsets(
    ground: GroundSet, base: Subset, k: int, budget=None
) -> Iterator[Subset]:
    """Yield every k-subset of the complement of ``base`` in lexicographic order."""
    ground.check(base)
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    rest = [j for j in range(ground.size) if not base.mask >> j & 1]
    if k > len(rest):
        raise PreconditionError(f"|base| + k = {len(base) + k} exceeds N = {ground.size}")
    check_budget(comb(len(rest), k), budget)
    for combo in combinations(rest, k):
        mask = 0
        for j in combo:
            mask |= 1 << j
        yield Subset(mask)


def combination_masks(elements: Sequence[int], k: int, budget=None) -> np.ndarray:
    """All k-combinations of ``elements`` as masks, lexicographic order."""
    check_budget(comb(len(elements), k), budget)
    out = [sum(1 << j for j in c) for c in combinations(elements, k)]
    return np.array(out, dtype=np.int64)
