import itertools
import random
from fractions import Fraction

import pytest

from locis import (
    EMPTY,
    CardinalityBound,
    EdgeSet,
    ExhaustiveOracle,
    FreeSystem,
    GreedyPrefOracle,
    LocalOracle,
    OracleContractError,
    ScriptedOracle,
    SignSystem,
    TimedMatching,
    ksystem_param_exact,
    truncated_exhaustive_scripted,
    validate_oracle,
)


def subsets(F):
    ids = F.ids()
    for r in range(len(ids) + 1):
        for c in itertools.combinations(ids, r):
            yield EdgeSet.from_ids(c)


def sign23():
    g = EdgeSet.of(0, 1, 2, 3, 4)
    return SignSystem(g, EdgeSet.of(0, 1), EdgeSet.of(2, 3, 4))


def test_exhaustive_is_exact_and_deterministic():
    s = sign23()
    o = ExhaustiveOracle(s)
    assert o.alpha == 1
    for F in subsets(s.ground):
        ans = o.query(F)
        assert ans <= F and s.membership(ans)
        best = max(len(J) for J in subsets(F) if s.membership(J))
        assert len(ans) == best
        assert o.query(F) == ans


def test_query_outside_ground_rejected():
    o = ExhaustiveOracle(FreeSystem(EdgeSet.of(0, 1)))
    with pytest.raises(ValueError):
        o.query(EdgeSet.of(2))


def test_alpha_below_one_rejected():
    with pytest.raises(ValueError):
        ScriptedOracle(FreeSystem(EMPTY), {}, alpha=Fraction(1, 2))


def test_greedy_pref_exact_on_matroids():
    g = EdgeSet.of(0, 1, 2, 3)
    o = GreedyPrefOracle(CardinalityBound(g, 2))
    assert o.alpha == 1
    assert o.query(g) == EdgeSet.of(0, 1)
    assert o.query(EdgeSet.of(1, 3)) == EdgeSet.of(1, 3)


def test_greedy_pref_order_respected():
    g = EdgeSet.of(0, 1, 2)
    o = GreedyPrefOracle(CardinalityBound(g, 1), pref=[2, 0, 1])
    assert o.query(g) == EdgeSet.of(2)
    assert o.query(EdgeSet.of(0, 1)) == EdgeSet.of(0)
    with pytest.raises(ValueError):
        GreedyPrefOracle(CardinalityBound(g, 1), pref=[0, 1])


def test_greedy_pref_alpha_defaults_to_k_param():
    s = sign23()
    o = GreedyPrefOracle(s)
    assert o.alpha == ksystem_param_exact(s) == 3
    # pref-first pick is the pos side; the scan stops at ceil(3/3) = 1 edge,
    # which is what keeps the answer size monotone across queries
    assert o.query(s.ground) == EdgeSet.of(0)
    assert o.query(EdgeSet.of(2, 3, 4)) == EdgeSet.of(2)
    o2 = GreedyPrefOracle(s, alpha=5)
    assert o2.alpha == 5


def test_greedy_pref_is_monotone_on_sign_systems():
    # a raw maximal greedy would answer {2,3,4} on the neg side but drop to
    # {0} once a pos edge joins the query; the truncated scan cannot
    s = sign23()
    o = GreedyPrefOracle(s)
    rep = validate_oracle(o)
    assert rep.ok, rep
    assert rep.alpha_measured == 3


def test_scripted_replays_and_falls_back():
    s = CardinalityBound(EdgeSet.of(0, 1, 2), 1)
    o = ScriptedOracle(s, {EdgeSet.of(0, 1, 2): EdgeSet.of(2)},
                       fallback=ExhaustiveOracle(s))
    assert o.query(EdgeSet.of(0, 1, 2)) == EdgeSet.of(2)
    assert o.query(EdgeSet.of(1, 2)) == EdgeSet.of(1)  # fallback
    o2 = ScriptedOracle(s, {})
    with pytest.raises(OracleContractError):
        o2.query(EdgeSet.of(0))


def test_scripted_fallback_must_match_system():
    s = CardinalityBound(EdgeSet.of(0, 1), 1)
    other = ExhaustiveOracle(FreeSystem(EdgeSet.of(0, 1)))
    with pytest.raises(ValueError):
        ScriptedOracle(s, {}, fallback=other)


def test_scripted_checks_subset_and_membership():
    s = CardinalityBound(EdgeSet.of(0, 1, 2), 1)
    bad_subset = ScriptedOracle(s, {EdgeSet.of(0): EdgeSet.of(1)})
    with pytest.raises(OracleContractError):
        bad_subset.query(EdgeSet.of(0))
    bad_member = ScriptedOracle(s, {EdgeSet.of(0, 1): EdgeSet.of(0, 1)},
                                alpha=1)
    with pytest.raises(OracleContractError):
        bad_member.query(EdgeSet.of(0, 1))


def test_scripted_checks_alpha():
    g = EdgeSet.of(0, 1, 2)
    s = FreeSystem(g)
    o = ScriptedOracle(s, {g: EdgeSet.of(0)}, alpha=2)
    with pytest.raises(OracleContractError):
        o.query(g)  # optimum 3, answer 1, alpha 2
    ok = ScriptedOracle(s, {g: EdgeSet.of(0, 1)}, alpha=2)
    assert ok.query(g) == EdgeSet.of(0, 1)


def test_scripted_checks_monotonicity_both_directions():
    g = EdgeSet.of(0, 1, 2)
    s = FreeSystem(g)
    o = ScriptedOracle(s, {g: EdgeSet.of(0, 1), EdgeSet.of(0): EdgeSet.of(0),
                           EdgeSet.of(0, 1): g & EdgeSet.of(0, 1)},
                       alpha=3)
    assert o.query(EdgeSet.of(0, 1)) == EdgeSet.of(0, 1)
    assert o.query(g) == EdgeSet.of(0, 1)
    # later smaller query must not beat the earlier superset's answer
    bigger = ScriptedOracle(s, {g: EdgeSet.of(0), EdgeSet.of(0, 1): EdgeSet.of(0, 1)},
                            alpha=3)
    assert bigger.query(g) == EdgeSet.of(0)
    with pytest.raises(OracleContractError):
        bigger.query(EdgeSet.of(0, 1))
    smaller = ScriptedOracle(s, {g: EdgeSet.of(0), EdgeSet.of(0, 1): EdgeSet.of(0, 1)},
                             alpha=3)
    assert smaller.query(EdgeSet.of(0, 1)) == EdgeSet.of(0, 1)
    with pytest.raises(OracleContractError):
        smaller.query(g)


def test_truncated_scripted_is_valid_alpha2():
    s = sign23()
    o = truncated_exhaustive_scripted(s)
    assert o.alpha == 2
    assert o.query(s.ground) == EdgeSet.of(2, 3)  # optimum {2,3,4} minus 4
    assert o.query(EdgeSet.of(0)) == EdgeSet.of(0)
    rep = validate_oracle(o)
    assert rep.ok, rep
    # a size-2 optimum truncated to one edge is the worst case
    assert rep.alpha_measured == Fraction(2)
    with pytest.raises(ValueError):
        truncated_exhaustive_scripted(FreeSystem(EdgeSet.from_ids(range(17))))


def test_validate_exhaustive_small():
    for s in (sign23(),
              CardinalityBound(EdgeSet.of(0, 1, 2), 1),
              TimedMatching(EdgeSet.of(0, 1), {0: frozenset({1}),
                                               1: frozenset({1})})):
        rep = validate_oracle(ExhaustiveOracle(s))
        assert rep.ok
        assert rep.checked == 1 << len(s.ground)
        assert rep.alpha_measured in (None, Fraction(1))
        assert "ok" in str(rep)


def test_validate_rejects_broken_scripted():
    # answers the empty set on a nonempty feasible query
    g = EdgeSet.of(0, 1, 2)
    s = FreeSystem(g)
    answers = {F: (EMPTY if F == EdgeSet.of(1) else F) for F in subsets(g)}
    rep = validate_oracle(ScriptedOracle(s, answers, alpha=1))
    assert not rep.ok
    assert rep.violation
    assert "FAIL" in str(rep)


class _Liar(LocalOracle):
    # ignores the query and hands back a fixed set
    def __init__(self, system, fixed):
        super().__init__(system, 1)
        self.fixed = fixed

    def _answer(self, F):
        return self.fixed


def test_validate_probes_catch_non_subset_answers():
    g = EdgeSet.of(0, 1, 2)
    rep = validate_oracle(_Liar(FreeSystem(g), EdgeSet.of(2)))
    assert not rep.ok
    assert "not inside" in rep.violation


def test_validate_sampled_mode():
    g = EdgeSet.from_ids(range(14))
    o = ExhaustiveOracle(CardinalityBound(g, 3))
    rep = validate_oracle(o, budget=256, rng=random.Random(5))
    assert rep.ok
    assert rep.checked <= 256 + 14 * max(1, 256 // (4 * 14))
