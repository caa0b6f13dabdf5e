"""Shared strategies, random generators and the acceptance recorder."""

import numpy as np
from hypothesis import strategies as st

from batchgreedy import Additive, GroundSet, PartitionMatroid, Subset, TaskAssignment

DESK_P = (0.2, 0.5, 0.8)

ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail=""):
    ACCEPTANCE_LINES.append((number, title, passed, detail))


@st.composite
def task_assignments(draw, n_max=3, N_min=2, N_max=7):
    n = draw(st.integers(1, n_max))
    N = draw(st.integers(N_min, N_max))
    probs = st.floats(0.01, 1.0, allow_nan=False)
    p = draw(st.lists(st.lists(probs, min_size=N, max_size=N), min_size=n, max_size=n))
    return TaskAssignment(p)


@st.composite
def additives(draw, N_min=1, N_max=7):
    N = draw(st.integers(N_min, N_max))
    w = draw(st.lists(st.floats(0, 10, allow_nan=False), min_size=N, max_size=N))
    return Additive(w)


@st.composite
def subsets_of(draw, n):
    return Subset.from_indices(draw(st.sets(st.integers(0, n - 1))))


@st.composite
def partition_matroids(draw, n):
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    used = sorted(set(labels))
    blocks = [Subset.from_indices(j for j in range(n) if labels[j] == b) for b in used]
    caps = [draw(st.integers(0, len(b))) for b in blocks]
    return PartitionMatroid(GroundSet(n), blocks, caps)


def random_task_assignment(rng, n=None, N=None):
    n = n or int(rng.integers(1, 4))
    N = N or int(rng.integers(3, 9))
    return TaskAssignment(rng.uniform(0.05, 0.95, size=(n, N)))


def random_subset(rng, candidates, prob=0.5):
    return Subset.from_indices(j for j in candidates if rng.random() < prob)


def random_partition(rng, s: Subset, max_blocks=3):
    """Random partition of ``s`` into nonempty blocks."""
    members = list(s.members)
    if not members:
        return []
    labels = rng.integers(0, max_blocks, size=len(members))
    return [
        Subset.from_indices(m for m, lab in zip(members, labels) if lab == b)
        for b in np.unique(labels)
    ]
