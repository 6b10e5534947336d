import itertools
import random
from fractions import Fraction

import pytest

from locis import (
    Cnf,
    EdgeSet,
    FormatError,
    Graph,
    bmatching_to_instance,
    fixed_order,
    greedy,
    lowerbound_fixture,
    max_independent,
    maxsat_to_instance,
    parse_dimacs,
    random_cnf,
    timed_to_instance,
    write_dimacs,
)


def all_subsets(ids):
    for r in range(len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            yield EdgeSet.from_ids(combo)


# ---------------------------------------------------------------- cnf


def test_cnf_normalization():
    c = Cnf(3, [(3, -1, 2, 3), (2,)])
    assert c.clauses == ((-1, 2, 3), (2,))
    # clause order and multiplicity preserved
    c2 = Cnf(2, [(2,), (1, -2), (2,)])
    assert c2.clauses == ((2,), (1, -2), (2,))
    assert Cnf(2, [(2, 1)]) == Cnf(2, [(1, 2)])


def test_cnf_rejects():
    with pytest.raises(ValueError):
        Cnf(-1, [])
    with pytest.raises(ValueError):
        Cnf(2, [()])
    with pytest.raises(ValueError):
        Cnf(2, [(0,)])
    with pytest.raises(ValueError):
        Cnf(2, [(3,)])
    with pytest.raises(ValueError):
        Cnf(2, [(1, -1)])  # tautology


def test_cnf_satisfied():
    c = Cnf(3, [(1, -2), (2, 3), (-1,)])
    assert c.satisfied([True, False, False]) == 1
    assert c.satisfied([False, False, True]) == 3
    assert c.satisfied([False, False, False]) == 2
    with pytest.raises(ValueError):
        c.satisfied([True])


# ---------------------------------------------------------------- dimacs


def test_dimacs_round_trip():
    c = Cnf(4, [(1, -3), (2, 3, -4), (-1,)])
    text = write_dimacs(c)
    assert text == "p cnf 4 3\n1 -3 0\n2 3 -4 0\n-1 0\n"
    assert parse_dimacs(text) == c


def test_dimacs_comments_and_multiline():
    text = "c a comment\n\np cnf 3 2\n1 2\n-3 0\nc mid\n2 0\n"
    c = parse_dimacs(text)
    assert c == Cnf(3, [(1, 2, -3), (2,)])


def test_dimacs_errors():
    with pytest.raises(FormatError):
        parse_dimacs("1 2 0\n")  # clause before problem line
    with pytest.raises(FormatError):
        parse_dimacs("p cnf x 1\n1 0\n")
    with pytest.raises(FormatError):
        parse_dimacs("p dnf 2 1\n1 0\n")
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 1\n1 q 0\n")
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 1\n1 2\n")  # unterminated
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 2\n1 0\n")  # count mismatch
    with pytest.raises(FormatError):
        parse_dimacs("")
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 1\n1 -1 0\n")  # tautology


def test_random_cnf():
    rng = random.Random(3)
    for _ in range(20):
        c = random_cnf(5, 8, 3, rng)
        assert c.nvars == 5 and len(c.clauses) == 8
        for cl in c.clauses:
            assert len({abs(l) for l in cl}) == 3
    assert random_cnf(4, 3, 2, random.Random(9)) == \
        random_cnf(4, 3, 2, random.Random(9))
    with pytest.raises(ValueError):
        random_cnf(3, 1, 0, rng)
    with pytest.raises(ValueError):
        random_cnf(3, 1, 4, rng)


# ---------------------------------------------------------------- max-sat


def test_maxsat_structure():
    red = maxsat_to_instance(Cnf(2, [(1, -2), (2,)]))
    inst = red.instance
    # variable vertices 0..1, clause vertices 2..3; edges sorted by pair
    assert inst.n == 4 and inst.m == 3
    assert inst.bipartition == ((0, 1), (2, 3))
    assert inst.declared_k == 1
    assert red.lit_of == {0: (1, 0), 1: (-2, 0), 2: (2, 1)}
    assert inst.systems[0].kind == "sign"
    assert inst.systems[2].kind == "card"
    # x2 cannot serve clause 0 negated and clause 1 positive at once
    assert not inst.independent(EdgeSet.of(1, 2))
    assert inst.independent(EdgeSet.of(0, 2))


def maxsat_brute(cnf):
    return max(
        cnf.satisfied(a)
        for a in itertools.product([False, True], repeat=cnf.nvars)
    )


def test_maxsat_opt_matches_brute_force():
    rng = random.Random(17)
    for _ in range(25):
        cnf = random_cnf(rng.randint(2, 4), rng.randint(1, 6),
                         rng.randint(1, 2), rng)
        red = maxsat_to_instance(cnf)
        res = max_independent(red.instance)
        assert res.opt_size == maxsat_brute(cnf)
        # the optimal witness decodes to an assignment hitting that many
        assert red.satisfied(res.witness) == res.opt_size


def test_maxsat_decode_lower_bounds():
    # any independent set marks clauses its decoded assignment satisfies
    rng = random.Random(18)
    cnf = random_cnf(4, 5, 3, rng)
    red = maxsat_to_instance(cnf)
    for F in itertools.islice(all_subsets(red.instance.edge_set.ids()), 200):
        if red.instance.independent(F):
            assert red.satisfied(F) >= len(F)


# ---------------------------------------------------------------- timed


def test_timed_instance_matches_pairwise_clash():
    G = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    rng = random.Random(21)
    for _ in range(10):
        labels = {e: frozenset(rng.sample(range(4), rng.randint(0, 2)))
                  for e in G.edge_ids}
        inst = timed_to_instance(G, labels)
        for S in all_subsets(G.edge_ids):
            want = all(
                not (set(G.verts(e)) & set(G.verts(f)))
                or not (labels[e] & labels[f])
                for e, f in itertools.combinations(S.ids(), 2)
            )
            assert inst.independent(S) == want


def test_timed_instance_missing_labels():
    G = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        timed_to_instance(G, {0: frozenset()})


# ---------------------------------------------------------------- b-matching


def test_bmatching_b1_is_matching():
    G = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)])
    inst = bmatching_to_instance(G, 1)
    for S in all_subsets(G.edge_ids):
        touched = list(itertools.chain.from_iterable(G.verts(e) for e in S))
        assert inst.independent(S) == (len(touched) == len(set(touched)))


def test_bmatching_dict_bounds():
    G = Graph(3, [(0, 1), (0, 2), (1, 2)])
    inst = bmatching_to_instance(G, {0: 2, 1: 1, 2: 1})
    assert inst.independent(EdgeSet.of(0, 1))  # both at vertex 0
    assert not inst.independent(EdgeSet.of(0, 2))  # two at vertex 1
    with pytest.raises(ValueError):
        bmatching_to_instance(G, {0: 1, 1: -1, 2: 1})


def test_bmatching_zero_capacity_drops_edges():
    G = Graph(4, [(0, 1), (1, 2), (2, 3)])
    inst = bmatching_to_instance(G, {0: 1, 1: 0, 2: 1, 3: 1})
    # both edges at vertex 1 are singleton-dependent and get stripped
    assert inst.edge_set == EdgeSet.of(2)
    assert inst.independent(EdgeSet.of(2))


# ---------------------------------------------------------------- fixtures


def measured_ratio(fx, trace):
    # the unrestricted fixtures exceed the default exact-search cap
    opt = max_independent(fx.instance, cap=fx.instance.m).opt_size
    return Fraction(opt, len(trace.I))


def test_star_fixedorder_fixture():
    fx = lowerbound_fixture("star_fixedorder", alpha=1, n=6)
    assert fx.algorithm == "fixed-order"
    tr = fixed_order(fx.instance, fx.order)
    assert tr.I == EdgeSet.of(0)
    assert measured_ratio(fx, tr) == fx.expected_ratio == Fraction(5)
    assert fx.proof_bound == Fraction(5)


def test_star_fixedorder_params():
    with pytest.raises(ValueError):
        lowerbound_fixture("star_fixedorder", alpha=Fraction(1, 2), n=6)
    with pytest.raises(ValueError):
        lowerbound_fixture("star_fixedorder", alpha=1, n=2)
    with pytest.raises(ValueError):
        lowerbound_fixture("star_fixedorder", alpha=7, n=6)


def test_complete_greedy_fixture():
    fx = lowerbound_fixture("complete_greedy", n=8)
    tr = greedy(fx.instance)
    assert len(tr.I) == 7
    assert measured_ratio(fx, tr) == fx.expected_ratio == Fraction(4)
    with pytest.raises(ValueError):
        lowerbound_fixture("complete_greedy", n=1)


def test_uw_greedy_fixture():
    fx = lowerbound_fixture("uw_greedy", alpha=2, n=10)
    assert fx.params["c"] == 5
    tr = greedy(fx.instance)
    assert len(tr.I) == 5
    got = measured_ratio(fx, tr)
    assert got == fx.expected_ratio == Fraction(39, 5)
    assert fx.proof_bound == Fraction(29, 4)
    assert got >= fx.proof_bound
    with pytest.raises(ValueError):
        lowerbound_fixture("uw_greedy", alpha=2, n=5)


def test_fixture_dispatch():
    with pytest.raises(ValueError):
        lowerbound_fixture("nope")
