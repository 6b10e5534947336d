"""Graphs, hypergraphs, and problem instances.

Vertices are dense ints 0..n-1.  Edge ids are stable non-negative ints:
dense 0..m-1 on freshly built structures, possibly sparse after restriction.
Structures and instances are immutable; every derived object (restriction,
induced substructure) is a new value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .edgeset import EMPTY, EdgeSet
from .errors import SingletonDependenceError
from . import kernels


class _Structure:
    delta_floor = 2

    def __init__(self, n: int, edges: Sequence[Iterable[int]],
                 edge_ids: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = [tuple(sorted(e)) for e in edges]
        if edge_ids is None:
            edge_ids = range(len(edges))
        ids = list(edge_ids)
        if len(ids) != len(edges):
            raise ValueError("edge id list length mismatch")
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge ids")
        order = sorted(range(len(ids)), key=lambda i: ids[i])
        self.n = n
        self._ids = tuple(ids[i] for i in order)
        self._verts = {}
        inc = [0] * n
        for i in order:
            eid = ids[i]
            vs = edges[i]
            if eid < 0:
                raise ValueError(f"negative edge id {eid}")
            self._check_edge(vs)
            for v in vs:
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} out of range for n={n}")
                inc[v] |= 1 << eid
            self._verts[eid] = vs
        self._inc = tuple(EdgeSet(m) for m in inc)
        self.edge_set = EdgeSet.from_ids(self._ids)
        self.m = len(self._ids)

    def _check_edge(self, vs):
        raise NotImplementedError

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return self._ids

    def verts(self, e: int) -> tuple[int, ...]:
        return self._verts[e]

    def incident(self, v: int) -> EdgeSet:
        return self._inc[v]

    def degree(self, v: int) -> int:
        return len(self._inc[v])

    def restrict(self, F: EdgeSet) -> "_Structure":
        """Same vertex set, edge set reduced to F (ids kept)."""
        if not F <= self.edge_set:
            raise ValueError("restriction set contains unknown edge ids")
        ids = [e for e in self._ids if e in F]
        return type(self)(self.n, [self._verts[e] for e in ids], ids)

    def induced(self, W: Iterable[int]) -> "_Structure":
        """Substructure induced by vertex set W: each edge becomes e∩W and
        survives only when at least two of its vertices lie in W.  Edge ids
        are kept; the vertex universe is unchanged (dropped vertices are
        simply isolated)."""
        Wset = set(W)
        for v in Wset:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range")
        ids = []
        edges = []
        for e in self._ids:
            cut = tuple(v for v in self._verts[e] if v in Wset)
            if len(cut) >= 2:
                ids.append(e)
                edges.append(cut)
        return type(self)(self.n, edges, ids)

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.n == other.n
                and self._ids == other._ids and self._verts == other._verts)

    def __hash__(self):
        return hash((type(self).__name__, self.n, self._ids,
                     tuple(self._verts[e] for e in self._ids)))


class Graph(_Structure):
    is_graph = True

    def _check_edge(self, vs):
        if len(vs) != 2 or vs[0] == vs[1]:
            raise ValueError(f"graph edge must join two distinct vertices, got {vs}")

    @property
    def delta(self) -> int:
        return 2

    def other_end(self, e: int, v: int) -> int:
        a, b = self._verts[e]
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} not an endpoint of edge {e}")

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class Hypergraph(_Structure):
    is_graph = False

    def _check_edge(self, vs):
        if len(vs) < 2:
            raise ValueError(f"hyperedge must contain at least two vertices, got {vs}")
        if len(set(vs)) != len(vs):
            raise ValueError(f"hyperedge has repeated vertices: {vs}")

    @property
    def delta(self) -> int:
        return max((len(self._verts[e]) for e in self._ids), default=0)

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m}, delta={self.delta})"


def induced_subhypergraph(H: _Structure, W: Iterable[int]) -> _Structure:
    return H.induced(W)


class Instance:
    """A (hyper)graph, one local independence system per vertex, and one
    local oracle per vertex.

    The global family is: I independent iff I ∩ E_v is a member of the
    system at every vertex v.  Construction checks that every edge is
    independent on its own at both (all) endpoints; pass
    drop_dependent_singletons=True to strip offending edges instead of
    erroring (only permitted when oracles are defaulted).

    Equality compares structure, systems, bipartition, and declared k;
    oracles are deliberately excluded (they are strategies, not data).
    """

    def __init__(self, structure: _Structure, systems: Sequence, oracles=None,
                 bipartition=None, declared_k=None,
                 drop_dependent_singletons: bool = False,
                 _check_oracles: bool = True):
        if len(systems) != structure.n:
            raise ValueError("need exactly one local system per vertex")
        for v, s in enumerate(systems):
            if s.ground != structure.incident(v):
                raise ValueError(f"system at vertex {v} has wrong ground set")
        bad = EMPTY
        for e in structure.edge_ids:
            for v in structure.verts(e):
                if not systems[v].membership(EdgeSet.single(e)):
                    bad = bad.add(e)
                    break
        if bad:
            if not drop_dependent_singletons:
                raise SingletonDependenceError(
                    f"edges {list(bad)} are dependent as singletons; "
                    "pass drop_dependent_singletons=True to strip them")
            if oracles is not None:
                raise ValueError("cannot drop edges when oracles are supplied")
            keep = structure.edge_set - bad
            structure = structure.restrict(keep)
            systems = [s.restricted(s.ground & keep) for s in systems]
        self.structure = structure
        self.systems = tuple(systems)
        if oracles is None:
            from .oracle import ExhaustiveOracle
            oracles = tuple(ExhaustiveOracle(s) for s in self.systems)
        else:
            oracles = tuple(oracles)
            if len(oracles) != structure.n:
                raise ValueError("need exactly one oracle per vertex")
            if _check_oracles:
                for v, o in enumerate(oracles):
                    if o.system != self.systems[v]:
                        raise ValueError(f"oracle at vertex {v} bound to a different system")
        self.oracles = oracles
        self.bipartition = self._check_bipartition(bipartition)
        if declared_k is not None:
            declared_k = Fraction(declared_k)
            if declared_k < 1:
                raise ValueError("declared k must be at least 1")
        self.declared_k = declared_k
        self._kernel = None

    def _check_bipartition(self, bip):
        if bip is None:
            return None
        if not self.structure.is_graph:
            raise ValueError("bipartition only applies to graph instances")
        v1 = tuple(sorted(bip[0]))
        v2 = tuple(sorted(bip[1]))
        if sorted(v1 + v2) != list(range(self.structure.n)):
            raise ValueError("bipartition must split the vertex set")
        side1 = set(v1)
        for e in self.structure.edge_ids:
            a, b = self.structure.verts(e)
            if (a in side1) == (b in side1):
                raise ValueError(f"edge {e} does not cross the bipartition")
        return (v1, v2)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def m(self) -> int:
        return self.structure.m

    @property
    def edge_set(self) -> EdgeSet:
        return self.structure.edge_set

    @property
    def is_graph(self) -> bool:
        return self.structure.is_graph

    def incident(self, v: int) -> EdgeSet:
        return self.structure.incident(v)

    @property
    def alpha(self) -> Fraction:
        return max((o.alpha for o in self.oracles), default=Fraction(1))

    def independent(self, J: EdgeSet) -> bool:
        """Global membership: J must satisfy every touched vertex's system."""
        if not J <= self.edge_set:
            raise ValueError("edge set contains unknown edge ids")
        seen = set()
        for e in J:
            for v in self.structure.verts(e):
                if v not in seen:
                    seen.add(v)
                    if not self.systems[v].membership(J & self.incident(v)):
                        return False
        return True

    def restrict(self, F: EdgeSet) -> "Instance":
        """Instance over the restricted edge set F.  The original oracles are
        kept: their queries in any run over the restriction are subsets of F,
        hence valid queries of the original systems with identical answers."""
        sub = self.structure.restrict(F)
        systems = [s.restricted(s.ground & F) for s in self.systems]
        return Instance(sub, systems, self.oracles,
                        bipartition=self.bipartition, declared_k=self.declared_k,
                        _check_oracles=False)

    def kernel(self):
        if self._kernel is None:
            m_top = self.edge_set.max() + 1 if self.edge_set else 0
            everts = [()] * m_top
            for e in self.structure.edge_ids:
                everts[e] = self.structure.verts(e)
            self._kernel = kernels.instance_handle(
                [s.handle() for s in self.systems], everts, m_top)
        return self._kernel

    def __eq__(self, other) -> bool:
        return (isinstance(other, Instance)
                and self.structure == other.structure
                and self.systems == other.systems
                and self.bipartition == other.bipartition
                and self.declared_k == other.declared_k)

    def __repr__(self):
        kind = "graph" if self.is_graph else "hypergraph"
        return f"Instance({kind}, n={self.n}, m={self.m})"
