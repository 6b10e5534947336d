import random

import pytest

from locis import EMPTY, EdgeSet, union_all


def test_constructors_agree():
    assert EdgeSet.of(0, 3, 5) == EdgeSet.from_ids([5, 3, 0]) == EdgeSet(0b101001)
    assert EdgeSet.single(4) == EdgeSet.of(4)
    assert EdgeSet.of() == EMPTY
    assert EdgeSet() == EMPTY


def test_negative_ids_rejected():
    with pytest.raises(ValueError):
        EdgeSet(-1)
    with pytest.raises(ValueError):
        EdgeSet.of(2, -3)
    with pytest.raises(ValueError):
        EdgeSet.single(-1)


def test_immutable():
    s = EdgeSet.of(1)
    with pytest.raises(AttributeError):
        s.mask = 7


def test_iteration_ascending():
    s = EdgeSet.of(9, 2, 70, 0)
    assert list(s) == [0, 2, 9, 70]
    assert s.ids() == (0, 2, 9, 70)
    assert len(s) == 4
    assert s.min() == 0 and s.max() == 70


def test_membership_and_truthiness():
    s = EdgeSet.of(1, 4)
    assert 1 in s and 4 in s
    assert 0 not in s and -2 not in s
    assert s and not EMPTY
    assert len(EMPTY) == 0


def test_set_algebra():
    a = EdgeSet.of(0, 1, 2)
    b = EdgeSet.of(2, 3)
    assert a | b == EdgeSet.of(0, 1, 2, 3)
    assert a & b == EdgeSet.of(2)
    assert a - b == EdgeSet.of(0, 1)
    assert EdgeSet.of(0, 1) <= a
    assert EdgeSet.of(0, 1) < a
    assert not a < a
    assert a <= a
    assert b.issubset(a | b)
    assert (a - b).isdisjoint(b)


def test_add_remove_discard():
    s = EdgeSet.of(1)
    assert s.add(3) == EdgeSet.of(1, 3)
    assert s.add(1) == s
    assert s.remove(1) == EMPTY
    with pytest.raises(KeyError):
        s.remove(2)
    assert s.discard(2) == s
    assert s.discard(1) == EMPTY
    # original untouched
    assert s == EdgeSet.of(1)


def test_min_max_empty_raise():
    with pytest.raises(ValueError):
        EMPTY.min()
    with pytest.raises(ValueError):
        EMPTY.max()


def test_hash_eq():
    assert hash(EdgeSet.of(2, 5)) == hash(EdgeSet.of(5, 2))
    assert EdgeSet.of(1) != EdgeSet.of(2)
    assert EdgeSet.of(1) != 2
    assert len({EdgeSet.of(1), EdgeSet.from_ids([1]), EdgeSet.of(2)}) == 2


def test_union_all():
    assert union_all([]) == EMPTY
    assert union_all([EdgeSet.of(0), EdgeSet.of(2), EdgeSet.of(0, 5)]) == \
        EdgeSet.of(0, 2, 5)


def test_repr():
    assert repr(EdgeSet.of(3, 1)) == "EdgeSet{1,3}"
    assert repr(EMPTY) == "EdgeSet{}"


def test_against_frozenset_model():
    rng = random.Random(7)
    for _ in range(300):
        xs = frozenset(rng.randrange(40) for _ in range(rng.randrange(8)))
        ys = frozenset(rng.randrange(40) for _ in range(rng.randrange(8)))
        a, b = EdgeSet.from_ids(xs), EdgeSet.from_ids(ys)
        assert set(a | b) == xs | ys
        assert set(a & b) == xs & ys
        assert set(a - b) == xs - ys
        assert (a <= b) == (xs <= ys)
        assert a.isdisjoint(b) == xs.isdisjoint(ys)
        assert len(a) == len(xs)
