"""Encodings of other problems as locally defined independence systems,
plus the hand-built instances on which the solvers are provably tight."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .edgeset import EMPTY, EdgeSet
from .errors import FormatError
from .model import Graph, Instance
from .oracle import ExhaustiveOracle, ScriptedOracle
from .systems import CardinalityBound, FreeSystem, SignSystem, TimedMatching


@dataclass(frozen=True)
class Cnf:
    """CNF formula with 1-based variables.

    Literals inside a clause are deduplicated and sorted; clause order and
    multiplicity are kept as given (they matter for MAX-SAT counts).
    Tautological clauses (x or not-x) are rejected: the sign encoding has
    no edge that could represent both polarities at once.
    """

    nvars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __init__(self, nvars: int, clauses):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        norm = []
        for cl in clauses:
            lits = sorted(set(cl), key=lambda l: (abs(l), l < 0))
            if not lits:
                raise ValueError("empty clause")
            for l in lits:
                if not isinstance(l, int) or l == 0 or abs(l) > nvars:
                    raise ValueError(f"bad literal {l!r}")
            seen = {abs(l) for l in lits}
            if len(seen) != len(lits):
                raise ValueError(f"tautological clause {tuple(cl)}")
            norm.append(tuple(lits))
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "clauses", tuple(norm))

    def satisfied(self, assignment) -> int:
        """Number of clauses with at least one true literal.  assignment is a
        sequence of bools, index v-1 for variable v."""
        if len(assignment) != self.nvars:
            raise ValueError("assignment length must equal nvars")
        count = 0
        for cl in self.clauses:
            if any((l > 0) == bool(assignment[abs(l) - 1]) for l in cl):
                count += 1
        return count


def parse_dimacs(text: str) -> Cnf:
    nvars = nclauses = None
    clauses = []
    current = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad problem line: {line!r}")
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"bad problem line: {line!r}") from None
            continue
        if nvars is None:
            raise FormatError("clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"bad token {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise FormatError("last clause not terminated by 0")
    if nvars is None:
        raise FormatError("missing problem line")
    if len(clauses) != nclauses:
        raise FormatError(f"expected {nclauses} clauses, found {len(clauses)}")
    try:
        return Cnf(nvars, clauses)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def write_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.nvars} {len(cnf.clauses)}"]
    for cl in cnf.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def random_cnf(nvars: int, nclauses: int, width: int, rng: random.Random) -> Cnf:
    """Clauses over `width` distinct variables with random polarities (so no
    tautologies)."""
    if width < 1 or width > nvars:
        raise ValueError("need 1 <= width <= nvars")
    clauses = []
    for _ in range(nclauses):
        vs = rng.sample(range(1, nvars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return Cnf(nvars, clauses)


@dataclass
class MaxSatReduction:
    """Bipartite sign encoding of MAX-SAT.

    Variables become V1 vertices carrying a sign system over their
    occurrence edges (positive vs negated); clauses become V2 vertices
    capped at one edge.  Independent sets correspond exactly to
    assignments plus a set of clauses they satisfy, so max independent set
    size equals the maximum number of satisfiable clauses.
    """

    cnf: Cnf
    instance: Instance
    lit_of: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def decode(self, I: EdgeSet):
        """Assignment read off an independent set: variable is True iff a
        positive edge of it was picked, default False."""
        assignment = [False] * self.cnf.nvars
        for e in I:
            lit, _ = self.lit_of[e]
            assignment[abs(lit) - 1] = lit > 0
        return assignment

    def satisfied(self, I: EdgeSet) -> int:
        return self.cnf.satisfied(self.decode(I))


def maxsat_to_instance(cnf: Cnf) -> MaxSatReduction:
    nv = cnf.nvars
    n = nv + len(cnf.clauses)
    pairs = []
    for j, cl in enumerate(cnf.clauses):
        for lit in cl:
            pairs.append(((abs(lit) - 1, nv + j), lit, j))
    pairs.sort(key=lambda t: t[0])
    lit_of = {i: (p[1], p[2]) for i, p in enumerate(pairs)}
    G = Graph(n, [p[0] for p in pairs])
    systems = []
    for v in range(n):
        ground = G.incident(v)
        if v < nv:
            pos = EdgeSet.from_ids(e for e in ground.ids() if lit_of[e][0] > 0)
            systems.append(SignSystem(ground, pos, ground - pos))
        else:
            systems.append(CardinalityBound(ground, 1))
    split = (tuple(range(nv)), tuple(range(nv, n)))
    inst = Instance(G, systems, bipartition=split, declared_k=1)
    return MaxSatReduction(cnf, inst, lit_of)


def timed_to_instance(G: Graph, labels: Dict[int, frozenset]) -> Instance:
    """Interval scheduling on edges: two edges at a vertex clash iff their
    label sets intersect."""
    missing = [e for e in G.edge_ids if e not in labels]
    if missing:
        raise ValueError(f"labels missing for edges {missing}")
    systems = []
    for v in range(G.n):
        ground = G.incident(v)
        local = {e: frozenset(labels[e]) for e in ground.ids()}
        systems.append(TimedMatching(ground, local))
    return Instance(G, systems)


def bmatching_to_instance(G: Graph, b) -> Instance:
    """Degree-bounded subgraph: at most b(v) chosen edges touch v.  Vertices
    with bound 0 make their edges dependent as singletons; those edges are
    dropped rather than rejected."""
    caps = {}
    for v in range(G.n):
        bv = b[v] if isinstance(b, dict) else b
        if bv < 0:
            raise ValueError(f"negative bound at vertex {v}")
        caps[v] = bv
    systems = [CardinalityBound(G.incident(v), caps[v]) for v in range(G.n)]
    return Instance(G, systems, drop_dependent_singletons=True)


@dataclass(frozen=True)
class Fixture:
    """A hand-built instance with a known worst-case ratio for one solver."""

    name: str
    instance: Instance
    algorithm: str
    order: Optional[Tuple[int, ...]]
    expected_ratio: Fraction
    proof_bound: Fraction
    params: Dict[str, object]


def _script(system, answer_for_full, alpha):
    full = system.ground
    answers = {full: answer_for_full, EMPTY: EMPTY}
    return ScriptedOracle(system, answers, fallback=None, alpha=alpha)


def star_fixedorder(alpha, n: int) -> Fixture:
    """Double star where a scripted oracle answers only the shared edge.

    Vertex 0 sees the shared edge plus floor(alpha)-1 spokes, vertex 1 sees
    the shared edge plus n-2 spokes to the same leaves.  Processing vertex 0
    first keeps one edge out of floor(alpha)+n-2.
    """
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    fa = math.floor(alpha)
    if n < 3 or fa > n - 1:
        raise ValueError("need n >= 3 and floor(alpha) <= n-1")
    pairs = [(0, 1)]
    pairs += [(0, 1 + i) for i in range(1, fa)]
    pairs += [(1, 1 + i) for i in range(1, n - 1)]
    G = Graph(n, pairs)
    systems = [FreeSystem(G.incident(v)) for v in range(G.n)]
    oracles = [_script(systems[0], EdgeSet.single(0), alpha)]
    oracles += [ExhaustiveOracle(systems[v]) for v in range(1, G.n)]
    inst = Instance(G, systems, oracles=oracles)
    size = fa + n - 2
    return Fixture(
        name="star_fixedorder",
        instance=inst,
        algorithm="fixed-order",
        order=tuple(range(n)),
        expected_ratio=Fraction(size),
        proof_bound=Fraction(size),
        params={"alpha": alpha, "n": n},
    )


def complete_greedy(n: int) -> Fixture:
    """Complete graph where every oracle answers its whole star, so the
    greedy sweep keeps one star out of n(n-1)/2 edges: ratio n/2."""
    if n < 2:
        raise ValueError("need n >= 2")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    G = Graph(n, sorted(pairs))
    systems = [FreeSystem(G.incident(v)) for v in range(G.n)]
    oracles = [_script(systems[v], systems[v].ground, 1) for v in range(G.n)]
    inst = Instance(G, systems, oracles=oracles)
    return Fixture(
        name="complete_greedy",
        instance=inst,
        algorithm="greedy",
        order=None,
        expected_ratio=Fraction(n, 2),
        proof_bound=Fraction(n, 2),
        params={"n": n},
    )


def uw_greedy(alpha, n: int) -> Fixture:
    """Clique-plus-independent-set instance driving the greedy sweep to its
    guarantee.

    A clique core of c+1 vertices, c = ceil((n-1)/alpha), is joined to n-1-c
    outer vertices that form no edges among themselves.  Oracles answer the
    c lowest-id incident edges, which is within alpha of the local optimum;
    the first sweep step keeps c edges and discards everything else.
    """
    alpha = Fraction(alpha)
    if (alpha - 1) * (n - 1) < alpha * (alpha + 1):
        raise ValueError("need (alpha-1)(n-1) >= alpha(alpha+1)")
    c = math.ceil(Fraction(n - 1, 1) / alpha)
    if c + 1 > n:
        raise ValueError("core larger than the vertex set")
    core = set(range(c + 1))
    pairs = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if u in core or v in core
    ]
    G = Graph(n, sorted(pairs))
    systems = [FreeSystem(G.incident(v)) for v in range(G.n)]
    oracles = []
    for v in range(G.n):
        ids = systems[v].ground.ids()
        ans = EdgeSet.from_ids(ids[: min(c, len(ids))])
        oracles.append(_script(systems[v], ans, alpha))
    inst = Instance(G, systems, oracles=oracles)
    m = len(pairs)
    return Fixture(
        name="uw_greedy",
        instance=inst,
        algorithm="greedy",
        order=None,
        expected_ratio=Fraction(m, c),
        proof_bound=alpha
        + Fraction(2 * alpha - 1, 1) / (2 * alpha) * (n - 1)
        - Fraction(1, 2)
        - alpha / 2,
        params={"alpha": alpha, "n": n, "c": c},
    )


FIXTURES = {
    "star_fixedorder": star_fixedorder,
    "complete_greedy": complete_greedy,
    "uw_greedy": uw_greedy,
}


def lowerbound_fixture(name: str, **params) -> Fixture:
    try:
        fn = FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}") from None
    return fn(**params)
