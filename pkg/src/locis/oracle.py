"""Local oracles: the only way algorithms touch the local systems.

An oracle for vertex v answers queries F ⊆ E_v with a member of I_v[F]
whose size is within a factor alpha of the best member.  Oracles must also
be monotone: |A(S)| <= |A(T)| whenever S ⊆ T.  ExhaustiveOracle is exact
(alpha = 1); GreedyPrefOracle runs truncated preference greedy (alpha = the
system's k parameter); ScriptedOracle replays stored answers and checks the
contract as it goes, which is how broken oracles are modelled in tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .edgeset import EMPTY, EdgeSet
from .errors import OracleContractError
from . import kernels
from .systems import LocalSystem, ksystem_param_exact


class LocalOracle:
    def __init__(self, system: LocalSystem, alpha):
        self.system = system
        self.alpha = Fraction(alpha)
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")

    def _answer(self, F: EdgeSet) -> EdgeSet:
        raise NotImplementedError

    def query(self, F: EdgeSet) -> EdgeSet:
        if not F <= self.system.ground:
            raise ValueError("oracle query outside the ground set")
        return self._answer(F)

    def __repr__(self):
        return f"{type(self).__name__}(alpha={self.alpha})"


class ExhaustiveOracle(LocalOracle):
    """Exact local optimization by branch and bound; alpha = 1.  Answers are
    deterministic (lexicographically least optimum)."""

    def __init__(self, system: LocalSystem):
        super().__init__(system, 1)

    def _answer(self, F):
        return EdgeSet(kernels.local_max(self.system.handle(), F.mask))


class GreedyPrefOracle(LocalOracle):
    """Preference greedy, truncated so the answer size is monotone.

    The scan picks edges of F in preference order while independence holds,
    but stops after ceil(opt(F)/alpha) picks, where opt(F) is the exact
    local optimum size.  Truncating at that size keeps |answer| a monotone
    function of F (opt is monotone; a raw maximal greedy set is not), and
    the scan always gets that far when alpha is at least the k parameter:
    every maximal subset of F has size >= opt(F)/k.  Matroid kinds have
    k = 1, so there the answer is a full maximum set.  When alpha is not
    supplied it defaults to the system's exact k parameter.
    """

    def __init__(self, system: LocalSystem, pref: Optional[Sequence[int]] = None,
                 alpha=None):
        if alpha is None:
            alpha = ksystem_param_exact(system)
        super().__init__(system, alpha)
        if pref is not None:
            pref = tuple(pref)
            missing = system.ground - EdgeSet.from_ids(pref)
            if missing:
                raise ValueError("preference order must cover the ground set")
        self.pref = pref

    def _answer(self, F):
        opt = len(EdgeSet(kernels.local_max(self.system.handle(), F.mask)))
        target = math.ceil(opt / self.alpha)
        order = self.pref if self.pref is not None else self.system.ground.ids()
        impl, h = self.system.handle()
        S = 0
        picked = 0
        for e in order:
            if picked == target:
                break
            if e in F and impl.sys_add_ok(h, S, e):
                S |= 1 << e
                picked += 1
        return EdgeSet(S)


class ScriptedOracle(LocalOracle):
    """Replays a fixed map from query sets to answers, falling back to a
    backing oracle (or erroring) on unmapped queries.

    Every answer handed out is checked on the spot: it must be a member of
    I[F], must be within alpha of the true optimum (checked when the query
    is small enough to optimize exactly), and must not break monotonicity
    against any answer this oracle already issued.  Violations raise
    OracleContractError.
    """

    EXACT_CHECK_LIMIT = 20

    def __init__(self, system: LocalSystem, answers: Dict[EdgeSet, EdgeSet],
                 fallback: Optional[LocalOracle] = None, alpha=1):
        super().__init__(system, alpha)
        if fallback is not None and fallback.system != system:
            raise ValueError("fallback oracle bound to a different system")
        self.answers = dict(answers)
        self.fallback = fallback
        self._issued: Dict[int, int] = {}

    def _answer(self, F):
        if F in self.answers:
            ans = self.answers[F]
        elif self.fallback is not None:
            ans = self.fallback.query(F)
        else:
            raise OracleContractError(f"scripted oracle has no answer for {F!r}")
        self._check(F, ans)
        return ans

    def _check(self, F: EdgeSet, ans: EdgeSet):
        if not ans <= F:
            raise OracleContractError(f"answer {ans!r} is not a subset of the query {F!r}")
        if not self.system.membership(ans):
            raise OracleContractError(f"answer {ans!r} is not independent")
        if len(F) <= self.EXACT_CHECK_LIMIT:
            best = EdgeSet(kernels.local_max(self.system.handle(), F.mask))
            if self.alpha * len(ans) < len(best):
                raise OracleContractError(
                    f"answer of size {len(ans)} on {F!r} misses the "
                    f"alpha={self.alpha} guarantee (optimum {len(best)})")
        sz = len(ans)
        for fm, s in self._issued.items():
            if fm & ~F.mask == 0 and s > sz:
                raise OracleContractError(
                    f"monotonicity broken: |A({EdgeSet(fm)!r})| = {s} > "
                    f"{sz} = |A({F!r})|")
            if F.mask & ~fm == 0 and sz > s:
                raise OracleContractError(
                    f"monotonicity broken: |A({F!r})| = {sz} > "
                    f"{s} = |A({EdgeSet(fm)!r})|")
        self._issued[F.mask] = sz


def truncated_exhaustive_scripted(system: LocalSystem) -> ScriptedOracle:
    """A valid alpha = 2 oracle that is deliberately non-exact: it answers
    each query with the exact optimum minus its highest-id edge whenever the
    optimum has at least two edges.  Dropping one edge keeps membership
    (downward closure), halves the size at worst, and keeps monotonicity
    because the exact optimum size is monotone.  The full answer map is
    materialized, so the ground set must be small."""
    deg = len(system.ground)
    if deg > 16:
        raise ValueError("truncated scripted oracle limited to 16 ground edges")
    answers = {}
    edges = system.ground.ids()
    for cm in range(1 << deg):
        F = EdgeSet.from_ids(edges[i] for i in range(deg) if cm >> i & 1)
        best = EdgeSet(kernels.local_max(system.handle(), F.mask))
        if len(best) >= 2:
            best = best.remove(best.max())
        answers[F] = best
    return ScriptedOracle(system, answers, fallback=None, alpha=2)


@dataclass
class ValidationReport:
    ok: bool
    alpha_declared: Fraction
    alpha_measured: Optional[Fraction]
    checked: int
    violation: Optional[str] = None

    def __str__(self):
        if self.ok:
            meas = "" if self.alpha_measured is None else f", measured alpha {self.alpha_measured}"
            return f"ok ({self.checked} queries{meas})"
        return f"FAIL after {self.checked} queries: {self.violation}"


def validate_oracle(oracle: LocalOracle, budget: int = 2048,
                    rng: Optional[random.Random] = None) -> ValidationReport:
    """Probe an oracle for contract violations.

    Small ground sets (2^deg <= budget) are checked exhaustively: every
    query F gets a feasibility and alpha check, and monotonicity is checked
    on every covering pair (F - e, F).  Larger ground sets are sampled:
    random subsets plus random inclusion chains, alpha checked only on
    queries of at most 20 edges.  Stops at the first violation.
    """
    sys_ = oracle.system
    edges = sys_.ground.ids()
    deg = len(edges)
    if rng is None:
        rng = random.Random(0)
    checked = 0
    worst = Fraction(0)

    def probe(F: EdgeSet):
        nonlocal checked, worst
        checked += 1
        ans = oracle.query(F)
        if not ans <= F:
            return None, f"answer {ans!r} not inside query {F!r}"
        if not sys_.membership(ans):
            return None, f"answer {ans!r} dependent on query {F!r}"
        if len(F) <= 20:
            best = EdgeSet(kernels.local_max(sys_.handle(), F.mask))
            if len(best):
                if not len(ans):
                    return None, (f"answer empty on {F!r} but optimum has "
                                  f"size {len(best)}")
                ratio = Fraction(len(best), len(ans))
                if ratio > worst:
                    worst = ratio
                if ratio > oracle.alpha:
                    return None, (f"alpha violated on {F!r}: optimum "
                                  f"{len(best)}, answer {len(ans)}")
        return len(ans), None

    try:
        if (1 << deg) <= budget:
            sizes = {}
            for cm in range(1 << deg):
                F = EdgeSet.from_ids(edges[i] for i in range(deg) if cm >> i & 1)
                sz, bad = probe(F)
                if bad:
                    return ValidationReport(False, oracle.alpha, None, checked, bad)
                sizes[F.mask] = sz
            for fm, sz in sizes.items():
                m = fm
                while m:
                    low = m & -m
                    m ^= low
                    sub = fm ^ low
                    if sizes[sub] > sz:
                        return ValidationReport(
                            False, oracle.alpha, None, checked,
                            f"monotonicity broken between {EdgeSet(sub)!r} "
                            f"and {EdgeSet(fm)!r}")
            return ValidationReport(True, oracle.alpha,
                                    worst if worst else None, checked)
        # sampled mode
        seen = {}
        for _ in range(budget // 2):
            fm = rng.getrandbits(deg)
            F = EdgeSet.from_ids(edges[i] for i in range(deg) if fm >> i & 1)
            sz, bad = probe(F)
            if bad:
                return ValidationReport(False, oracle.alpha, None, checked, bad)
            for om, osz in seen.items():
                if om & ~F.mask == 0 and osz > sz:
                    return ValidationReport(
                        False, oracle.alpha, None, checked,
                        f"monotonicity broken between {EdgeSet(om)!r} and {F!r}")
                if F.mask & ~om == 0 and sz > osz:
                    return ValidationReport(
                        False, oracle.alpha, None, checked,
                        f"monotonicity broken between {F!r} and {EdgeSet(om)!r}")
            seen[F.mask] = sz
        chains = max(1, budget // (4 * max(deg, 1)))
        for _ in range(chains):
            perm = list(edges)
            rng.shuffle(perm)
            F = EMPTY
            prev = 0
            for e in perm:
                F = F.add(e)
                sz, bad = probe(F)
                if bad:
                    return ValidationReport(False, oracle.alpha, None, checked, bad)
                if sz < prev:
                    return ValidationReport(
                        False, oracle.alpha, None, checked,
                        f"monotonicity broken along a chain at {F!r}")
                prev = sz
        return ValidationReport(True, oracle.alpha, worst if worst else None,
                                checked)
    except OracleContractError as exc:
        return ValidationReport(False, oracle.alpha, None, checked, str(exc))
