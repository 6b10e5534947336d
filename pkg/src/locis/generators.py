"""Random graphs, hypergraphs, local systems and full instances.

Everything here is driven by an explicit random.Random so that test runs
and benchmarks are reproducible from a seed alone.
"""

from __future__ import annotations

import itertools
import random

from .edgeset import EMPTY, EdgeSet
from .model import Graph, Hypergraph, Instance
from .oracle import ExhaustiveOracle, GreedyPrefOracle, truncated_exhaustive_scripted
from .systems import (
    CardinalityBound,
    ExplicitSystem,
    FreeSystem,
    PartitionMatroid,
    SignSystem,
    TimedMatching,
)

SYSTEM_KINDS = ("free", "card", "partition", "timed", "sign", "explicit")
ORACLE_KINDS = ("exhaustive", "truncated", "greedy", "mixed")


def _canon(pairs):
    # canonical edge ids: sort vertex tuples, number 0..m-1 in that order
    return sorted(pairs)


def gnp_graph(n: int, p: float, rng: random.Random) -> Graph:
    """Graph on n vertices, each pair kept independently with probability p."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, _canon(pairs))


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform-ish random tree: vertex v attaches to a random earlier vertex."""
    if n < 1:
        raise ValueError("need n >= 1")
    pairs = [(rng.randrange(v), v) for v in range(1, n)]
    return Graph(n, _canon(pairs))


def kdeg_graph(n: int, k: int, rng: random.Random) -> Graph:
    """Random graph with degeneracy at most k.

    Vertices are shuffled; each vertex draws up to k neighbours among the
    vertices after it in the shuffle, so the reversed shuffle witnesses
    width <= k.
    """
    if n < 0 or k < 0:
        raise ValueError("need n >= 0 and k >= 0")
    seq = list(range(n))
    rng.shuffle(seq)
    pairs = []
    for i, v in enumerate(seq):
        rest = seq[i + 1 :]
        d = rng.randint(0, min(k, len(rest)))
        for w in rng.sample(rest, d):
            pairs.append((min(v, w), max(v, w)))
    return Graph(n, _canon(pairs))


def uniform_hypergraph(
    n: int, d: int, m: int, rng: random.Random, linear: bool = False
) -> Hypergraph:
    """m distinct d-vertex edges; linear=True forbids two edges sharing
    more than one vertex (rejection sampling, may raise if too dense)."""
    if d < 2 or d > n:
        raise ValueError("need 2 <= d <= n")
    edges: set[tuple] = set()
    tries = 0
    while len(edges) < m:
        tries += 1
        if tries > 200 * max(m, 1):
            raise ValueError("could not place %d edges" % m)
        e = tuple(sorted(rng.sample(range(n), d)))
        if e in edges:
            continue
        if linear and any(len(set(e) & set(f)) > 1 for f in edges):
            continue
        edges.add(e)
    return Hypergraph(n, _canon(edges))


def random_bipartite(n1: int, n2: int, p: float, rng: random.Random):
    """Bipartite graph plus its (V1, V2) split, V1 = 0..n1-1."""
    if n1 < 0 or n2 < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n1, n2 >= 0 and 0 <= p <= 1")
    pairs = [
        (u, n1 + w)
        for u in range(n1)
        for w in range(n2)
        if rng.random() < p
    ]
    split = (tuple(range(n1)), tuple(range(n1, n1 + n2)))
    return Graph(n1 + n2, _canon(pairs)), split


def random_system(kind: str, ground: EdgeSet, rng: random.Random):
    """Random local system of the given kind on ground.

    Every kind keeps singletons independent, so instances built from these
    never reject edges.
    """
    ids = list(ground.ids())
    deg = len(ids)
    if kind == "free":
        return FreeSystem(ground)
    if kind == "card":
        return CardinalityBound(ground, rng.randint(1, max(deg, 1)))
    if kind == "partition":
        t = rng.randint(1, max(deg, 1))
        buckets: dict[int, list] = {}
        for e in ids:
            buckets.setdefault(rng.randrange(t), []).append(e)
        blocks = [
            (EdgeSet.from_ids(b), rng.randint(1, len(b))) for b in buckets.values()
        ]
        return PartitionMatroid(ground, blocks)
    if kind == "timed":
        labels = {e: frozenset(rng.sample(range(4), rng.randint(1, 3))) for e in ids}
        return TimedMatching(ground, labels)
    if kind == "sign":
        pos = [e for e in ids if rng.random() < 0.5]
        neg = [e for e in ids if e not in pos]
        return SignSystem(ground, EdgeSet.from_ids(pos), EdgeSet.from_ids(neg))
    if kind == "explicit":
        members = {EMPTY} | {EdgeSet.single(e) for e in ids}
        for _ in range(rng.randint(0, 3)):
            sub = [e for e in ids if rng.random() < 0.5]
            # downward closure of the sampled basis set
            for r in range(len(sub) + 1):
                for comb in itertools.combinations(sub, r):
                    members.add(EdgeSet.from_ids(comb))
        return ExplicitSystem(ground, members)
    raise ValueError("unknown system kind %r" % kind)


def _oracle_for(system, kind: str, rng: random.Random):
    if kind == "exhaustive":
        return ExhaustiveOracle(system)
    if kind == "truncated":
        return truncated_exhaustive_scripted(system)
    if kind == "greedy":
        pref = list(system.ground.ids())
        rng.shuffle(pref)
        return GreedyPrefOracle(system, pref=pref)
    raise ValueError("unknown oracle kind %r" % kind)


def random_instance(
    structure,
    rng: random.Random,
    kinds=SYSTEM_KINDS,
    oracle_kind: str = "exhaustive",
    bipartition=None,
) -> Instance:
    """Instance with a random system per vertex and the requested oracles.

    oracle_kind "mixed" picks per vertex among the other three. Kinds whose
    construction or oracle cannot handle the vertex degree are skipped for
    that vertex (explicit tables and truncated scripts need small degrees).
    """
    if oracle_kind not in ORACLE_KINDS:
        raise ValueError("unknown oracle kind %r" % oracle_kind)
    systems = []
    oracles = []
    for v in range(structure.n):
        ground = structure.incident(v)
        deg = len(ground)
        ok = [k for k in kinds if k != "explicit" or deg <= 10]
        if not ok:
            ok = ["card"]
        sys_v = random_system(rng.choice(ok), ground, rng)
        okind = oracle_kind
        if okind == "mixed":
            okind = rng.choice(("exhaustive", "truncated", "greedy"))
        if okind == "truncated" and deg > 16:
            okind = "exhaustive"
        # greedy declares the exact k-system parameter, found by table scan
        if okind == "greedy" and deg > 12:
            okind = "exhaustive"
        oracles.append(_oracle_for(sys_v, okind, rng))
        systems.append(sys_v)
    return Instance(structure, systems, oracles=oracles, bipartition=bipartition)
