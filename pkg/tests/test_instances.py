import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from batchgreedy import (
    InstanceFormatError,
    PreconditionError,
    Subset,
    check_matroid_axioms,
    certify_monotone_submodular,
)
from batchgreedy.instances import SplitMix64, dumps, from_dict, generate_instance, load, loads, save


def test_splitmix_reference_vectors():
    # published test vector for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_splitmix_helpers():
    rng = SplitMix64(3)
    xs = [rng.uniform() for _ in range(1000)]
    assert all(0 <= x < 1 for x in xs)
    assert sorted(SplitMix64(1).shuffle(list(range(10)))) == list(range(10))
    assert {SplitMix64(s).randint(2, 4) for s in range(50)} == {2, 3, 4}


def test_gen_deterministic():
    a = dumps(generate_instance(7, 1, 3, 2))
    b = dumps(generate_instance(7, 1, 3, 2))
    assert a == b
    assert a != dumps(generate_instance(8, 1, 3, 2))


def test_gen_probabilities_in_range():
    inst = generate_instance(1, 3, 8, 4)
    p = inst.objective.p
    assert p.min() >= 0.05 and p.max() <= 0.95
    assert all(round(x, 6) == x for x in p.ravel())


def test_round_trip_bytes(tmp_path):
    inst = generate_instance(7, 1, 3, 2)
    path = tmp_path / "i.json"
    save(inst, path)
    again = load(path)
    assert again == inst
    assert dumps(again) == path.read_text()
    assert path.read_text().endswith("\n")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63), st.integers(1, 3), st.integers(1, 7), st.data(), st.sampled_from(["uniform", "partition", "explicit"]))
def test_generated_instances_are_valid(seed, n, N, data, kind):
    K = data.draw(st.integers(1, N))
    inst = generate_instance(seed, n, N, K, kind)
    assert inst.matroid.rank_upper() == K
    assert check_matroid_axioms(inst.matroid).ok
    assert certify_monotone_submodular(inst.objective).ok
    assert loads(dumps(inst)) == inst


@pytest.mark.parametrize(
    "args",
    [(0, 0, 3, 2, "uniform"), (0, 1, 3, 0, "uniform"), (0, 1, 3, 4, "uniform"), (0, 1, 3, 2, "graphic")],
)
def test_gen_rejects_bad_ranges(args):
    with pytest.raises(PreconditionError):
        generate_instance(*args)


def _base():
    return {
        "ground": {"size": 3},
        "objective": {"task_assignment": {"p": [[0.2, 0.5, 0.8]]}},
        "matroid": {"uniform": {"K": 2}},
    }


def test_other_objectives_and_matroids():
    d = _base()
    d["objective"] = {"table": {"values": [0, 1, 1, 2, 1, 2, 2, 2]}}
    d["matroid"] = {"partition": {"blocks": [[0, 1], [2]], "capacities": [1, 1]}}
    inst = from_dict(d)
    assert inst.objective(Subset.of(0, 1)) == 2
    d["objective"] = {"additive": {"w": [1, 2, 3]}}
    d["matroid"] = {"explicit": {"maximal_sets": [[0, 1], [1, 2]]}}
    assert loads(dumps(from_dict(d))) == from_dict(d)


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d["objective"]["task_assignment"]["p"][0].__setitem__(2, 1.5), "objective.task_assignment.p[0][2]"),
        (lambda d: d["objective"]["task_assignment"]["p"][0].pop(), "objective.task_assignment.p[0]"),
        (lambda d: d["ground"].__setitem__("size", 0), "ground.size"),
        (lambda d: d.pop("matroid"), "$: missing field 'matroid'"),
        (lambda d: d["matroid"].__setitem__("uniform", {"K": "2"}), "matroid.uniform.K"),
        (lambda d: d.__setitem__("matroid", {"graphic": {}}), "matroid"),
        (lambda d: d.__setitem__("objective", {"additive": {"w": [1, -1, 2]}}), "objective.additive.w[1]"),
        (lambda d: d.__setitem__("objective", {"table": {"values": [1] * 8}}), "objective.table.values[0]"),
        (lambda d: d.__setitem__("matroid", {"partition": {"blocks": [[0, 1], [2, 5]], "capacities": [1, 1]}}), "matroid.partition.blocks[1]"),
        (lambda d: d.__setitem__("matroid", {"partition": {"blocks": [[0, 1]], "capacities": [1]}}), "matroid.partition"),
    ],
)
def test_field_path_errors(mutate, where):
    d = _base()
    mutate(d)
    with pytest.raises(InstanceFormatError) as e:
        from_dict(d)
    assert str(e.value).startswith(where)


def test_corrupt_json_reports_position():
    with pytest.raises(InstanceFormatError, match="line 2 column"):
        loads('{"ground":\n  {"size": 3,,}}')


def test_digest_stable():
    d = _base()
    assert from_dict(d).digest() == from_dict(json.loads(json.dumps(d))).digest()
