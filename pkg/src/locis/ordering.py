"""Vertex orders, upward/downward edge splits, width, and decompositions.

Relative to a total vertex order, an edge is upward at vertex v when some
vertex of the edge comes strictly later than v, and downward at exactly its
last vertex.  The width of an order is the largest upward degree; the
minimum width over all orders (the degeneracy) is achieved by the min-degree
peeling order computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

from .edgeset import EMPTY, EdgeSet, union_all
from .model import Graph, _Structure


@dataclass(frozen=True)
class VertexOrder:
    seq: tuple            # vertices, earliest first
    pos: tuple            # pos[v] = index of v in seq
    up: tuple             # up[v] = upward edges at v (EdgeSet)
    down: tuple           # down[v] = downward edges at v (EdgeSet)
    width: int

    def __iter__(self):
        return iter(self.seq)


def order_for(structure: _Structure, seq: Sequence[int]) -> VertexOrder:
    """Attach upward/downward splits and width to an explicit order."""
    seq = tuple(seq)
    if sorted(seq) != list(range(structure.n)):
        raise ValueError("order must be a permutation of the vertices")
    pos = [0] * structure.n
    for i, v in enumerate(seq):
        pos[v] = i
    up = [0] * structure.n
    down = [0] * structure.n
    for e in structure.edge_ids:
        vs = structure.verts(e)
        last = max(vs, key=lambda v: pos[v])
        bit = 1 << e
        down[last] |= bit
        for v in vs:
            if v != last:
                up[v] |= bit
    width = max((m.bit_count() for m in up), default=0)
    return VertexOrder(seq, tuple(pos), tuple(EdgeSet(m) for m in up),
                       tuple(EdgeSet(m) for m in down), width)


def width_of(structure: _Structure, seq: Sequence[int]) -> int:
    return order_for(structure, seq).width


def degeneracy_order(structure: _Structure) -> VertexOrder:
    """Min-degree peeling order; its width equals the degeneracy, the
    minimum width over all orders.

    An edge counts toward a vertex's degree while at least two of its
    vertices are still unpeeled; once only one remains, the edge is downward
    there and stops counting.  Ties pick the lowest vertex id.
    """
    n = structure.n
    alive_count = {e: len(structure.verts(e)) for e in structure.edge_ids}
    deg = [0] * n
    for e in structure.edge_ids:
        for v in structure.verts(e):
            deg[v] += 1
    removed = [False] * n
    seq = []
    for _ in range(n):
        v = min((w for w in range(n) if not removed[w]), key=lambda w: (deg[w], w))
        removed[v] = True
        seq.append(v)
        for e in structure.incident(v):
            if alive_count[e] <= 1:
                continue
            alive_count[e] -= 1
            if alive_count[e] == 1:
                # the edge dies: its one remaining vertex drops it
                for w in structure.verts(e):
                    if not removed[w]:
                        deg[w] -= 1
        deg[v] = 0
    return order_for(structure, seq)


def forest_decompose(G: Graph, order: VertexOrder) -> List[EdgeSet]:
    """Split a graph's edges into width-many forests: the i-th upward edge
    of each vertex goes to class i.  Upward edges are ranked by the position
    of their other endpoint, then by id.  Each class gives every vertex at
    most one upward edge, so following upward edges strictly increases
    position and the class is a forest."""
    if not isinstance(G, Graph):
        raise ValueError("forest decomposition applies to graphs")
    classes = [0] * order.width
    for v in range(G.n):
        ups = sorted(order.up[v], key=lambda e: (order.pos[G.other_end(e, v)], e))
        for i, e in enumerate(ups):
            classes[i] |= 1 << e
    return [EdgeSet(m) for m in classes]


def width1_decompose(H: _Structure, order: VertexOrder) -> List[EdgeSet]:
    """Split a hypergraph's edges into classes of width one.

    Edges are taken at their first vertex in the order, ascending id; each
    goes to the earliest existing class that contains no edge upward at any
    non-last vertex of it, or to a fresh class.  With width g and largest
    edge size d this needs at most (d-1)(g-1)+1 classes.
    """
    classes: List[int] = []
    up_in: List[List[int]] = []      # up_in[q][v]: upward edges of v in class q
    for v in order.seq:
        first = [e for e in order.up[v]
                 if all(order.pos[w] >= order.pos[v] for w in H.verts(e))]
        for e in first:
            vs = H.verts(e)
            last = max(vs, key=lambda w: order.pos[w])
            others = [w for w in vs if w != last]
            chosen = -1
            for q in range(len(classes)):
                if all(up_in[q][w] == 0 for w in others):
                    chosen = q
                    break
            if chosen < 0:
                classes.append(0)
                up_in.append([0] * H.n)
                chosen = len(classes) - 1
            classes[chosen] |= 1 << e
            for w in others:
                up_in[chosen][w] |= 1 << e
    return [EdgeSet(m) for m in classes]
