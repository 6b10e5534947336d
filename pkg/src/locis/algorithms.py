"""The solvers: maximization through local oracles.

Every solver returns a SolveTrace carrying the solution I, the per-vertex
parts P_v it certified, the residual pieces R_v, the oracle transcript, and
the a-priori guarantee.  The parts always satisfy three invariants, checked
on every run: I is independent, the P_v are pairwise disjoint subsets of
the local edge sets, and the R_v tile exactly the edges left uncovered by
the parts.  Breaking any of these raises InvariantError.

The certified a-posteriori ratio (oracle factor plus best residual packing
over |I|) is computed separately in locis.exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .edgeset import EMPTY, EdgeSet, union_all
from .errors import InvariantError, OracleContractError
from .model import Graph, Instance
from .ordering import VertexOrder, degeneracy_order, forest_decompose, \
    order_for, width1_decompose


@dataclass(frozen=True)
class IterationRecord:
    step: int
    vertex: int
    case: str
    chosen: Optional[int]
    queries: tuple          # (vertex, query EdgeSet, answer EdgeSet) misses


@dataclass
class SolveTrace:
    algorithm: str
    I: EdgeSet
    I_parts: Dict[int, EdgeSet]
    P: Dict[int, EdgeSet]
    R: Dict[int, EdgeSet]
    iterations: Tuple[IterationRecord, ...]
    bound: Optional[Fraction]
    bound_note: str
    alpha: Fraction
    params: Dict[str, object]
    query_log: tuple
    order: Optional[tuple]
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def residual(self) -> EdgeSet:
        return union_all(self.R.values())

    def __repr__(self):
        b = "none" if self.bound is None else str(self.bound)
        return (f"SolveTrace({self.algorithm}, |I|={len(self.I)}, bound={b})")


class _Runner:
    """Memoizing oracle frontend.  Each distinct (vertex, query) pair hits
    the oracle once; answers are checked for feasibility on the way out."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.memo: Dict[tuple, EdgeSet] = {}
        self.log = []
        self._pending = []

    def query(self, v: int, F: EdgeSet) -> EdgeSet:
        key = (v, F.mask)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ans = self.inst.oracles[v].query(F)
        if not ans <= F:
            raise OracleContractError(
                f"oracle at vertex {v} answered {ans!r} outside query {F!r}")
        if not self.inst.systems[v].membership(ans):
            raise OracleContractError(
                f"oracle at vertex {v} answered dependent set {ans!r}")
        self.memo[key] = ans
        self.log.append((v, F, ans))
        self._pending.append((v, F, ans))
        return ans

    def take_iteration(self) -> tuple:
        out = tuple(self._pending)
        self._pending = []
        return out


def _resolve_order(inst: Instance, order) -> VertexOrder:
    if order is None:
        return degeneracy_order(inst.structure)
    if isinstance(order, VertexOrder):
        return order
    return order_for(inst.structure, order)


def _finalize(inst: Instance, algorithm: str, ivs, P, R, iterations, runner,
              bound, bound_note, params, order, extras=None) -> SolveTrace:
    parts = {v: s for v, s in ivs.items() if s}
    Pn = {v: s for v, s in P.items() if s}
    Rn = {v: s for v, s in R.items() if s}
    I = union_all(parts.values())
    if not inst.independent(I):
        raise InvariantError(f"{algorithm}: output {I!r} is not independent")
    covered = EMPTY
    for v, s in Pn.items():
        if not s <= inst.incident(v):
            raise InvariantError(f"{algorithm}: part at {v} leaves E_{v}")
        if not covered.isdisjoint(s):
            raise InvariantError(f"{algorithm}: parts overlap at vertex {v}")
        covered |= s
    if union_all(Rn.values()) != inst.edge_set - covered:
        raise InvariantError(
            f"{algorithm}: residual pieces do not tile the uncovered edges "
            f"(R={union_all(Rn.values())!r}, uncovered={inst.edge_set - covered!r})")
    alpha = max((inst.oracles[v].alpha for v in Pn), default=Fraction(1))
    return SolveTrace(algorithm, I, parts, Pn, Rn, tuple(iterations), bound,
                      bound_note, alpha, params, tuple(runner.log),
                      tuple(order) if order is not None else None,
                      extras or {})


def rho(alpha, n: int) -> Fraction:
    """Guarantee of the greedy vertex order as a function of the oracle
    factor and the vertex count."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if n < 1:
        raise ValueError("need at least one vertex")
    x = (alpha - 1) * (n - 1)
    if x >= alpha * (alpha + 1):
        return alpha + (2 * alpha - 1) / (2 * alpha) * (n - 1) - Fraction(1, 2)
    if x >= alpha:
        return alpha + alpha / (alpha + 1) * (n - 1)
    return Fraction(n, 2)


def _sweep_body(inst, runner, v, F, P, R, ivs):
    """Shared per-vertex step of the two sweep solvers: claim everything
    still free at v, then retire the edge sets of the matched neighbours."""
    G = inst.structure
    Pv = G.incident(v) & F
    ans = runner.query(v, Pv)
    ivs[v] = ans
    nbr = EMPTY
    for e in ans:
        nbr |= G.incident(G.other_end(e, v))
    Rv = (nbr - Pv) & F
    if Pv:
        P[v] = Pv
    if Rv:
        R[v] = Rv
    return F - (Pv | Rv)


def fixed_order(inst: Instance, order: Optional[Sequence[int]] = None,
                debug: bool = False) -> SolveTrace:
    """Sweep the vertices in a predetermined order; at each vertex claim all
    still-unclaimed incident edges as its part.  Guarantee alpha + n - 2."""
    if not inst.is_graph:
        raise ValueError("fixed_order runs on graph instances")
    n = inst.n
    seq = list(range(n)) if order is None else list(order)
    if sorted(seq) != list(range(n)):
        raise ValueError("order must be a permutation of the vertices")
    runner = _Runner(inst)
    F = inst.edge_set
    P, R, ivs, iters = {}, {}, {}, []
    for step, v in enumerate(seq):
        if not F:
            break
        F = _sweep_body(inst, runner, v, F, P, R, ivs)
        iters.append(IterationRecord(step, v, "", None, runner.take_iteration()))
    bound = inst.alpha + n - 2
    return _finalize(inst, "fixed-order", ivs, P, R, iters, runner, bound, "",
                     {"n": n}, seq)


def greedy(inst: Instance, debug: bool = False) -> SolveTrace:
    """Sweep the vertices in greedy order: always the vertex whose oracle
    currently promises the largest answer.  Guarantee rho(alpha, n)."""
    if not inst.is_graph:
        raise ValueError("greedy runs on graph instances")
    n = inst.n
    runner = _Runner(inst)
    F = inst.edge_set
    W = list(range(n))
    P, R, ivs, iters = {}, {}, {}, []
    seq = []
    step = 0
    while W and F:
        best_v, best_sz = -1, -1
        for w in W:
            sz = len(runner.query(w, inst.incident(w) & F))
            if sz > best_sz:
                best_v, best_sz = w, sz
        v = best_v
        W.remove(v)
        seq.append(v)
        F = _sweep_body(inst, runner, v, F, P, R, ivs)
        iters.append(IterationRecord(step, v, "", None, runner.take_iteration()))
        step += 1
    bound = rho(inst.alpha, n)
    return _finalize(inst, "greedy", ivs, P, R, iters, runner, bound, "",
                     {"n": n}, seq)


def ordered_approx(inst: Instance, order=None, debug: bool = False) -> SolveTrace:
    """Bottom-up solver for graphs: parts start as the downward edge sets
    and each vertex may claim at most one upward edge, so at most width - 1
    upward edges per vertex fall into the residual.  Guarantee
    alpha + 2*width - 2."""
    if not inst.is_graph:
        raise ValueError("ordered_approx runs on graph instances; "
                         "use ordered_approx_hyper for hypergraphs")
    G = inst.structure
    vo = _resolve_order(inst, order)
    runner = _Runner(inst)
    n = inst.n
    P = {v: vo.down[v] for v in range(n)}
    R: Dict[int, EdgeSet] = {}
    X = set()
    Rall = EMPTY
    ivs, iters = {}, []
    for i, v in enumerate(vo.seq):
        U = vo.up[v]
        Pv = P[v]
        case, chosen = "1", None
        if not U:
            iv = runner.query(v, Pv)
            Rv = EMPTY
        elif not Pv:
            case = "4"
            iv, Rv = EMPTY, EMPTY
            X.add(v)
        else:
            base = runner.query(v, Pv)
            B = []
            for e in U:
                q = runner.query(v, Pv.add(e))
                if e in q and len(q) > len(base):
                    B.append(e)
            if not B:
                case = "2"
                e = U.min()
                chosen = e
                q = runner.query(v, Pv.add(e))
                iv = q if e not in q else base
                P[v] = Pv.add(e)
                Rv = U.remove(e)
                P[G.other_end(e, v)] = P[G.other_end(e, v)].discard(e)
            else:
                case = "3"
                b = B[0]
                chosen = b
                iv = runner.query(v, Pv.add(b)).discard(b)
                Rv = U.remove(b)
        ivs[v] = iv
        if Rv:
            R[v] = Rv
            Rall |= Rv
        for e in iv:
            u = G.other_end(e, v)
            if u in X:
                late = EdgeSet.from_ids(
                    f for f in vo.up[u] if vo.pos[G.other_end(f, u)] > i)
                if late:
                    R[u] = late
                    Rall |= late
                X.discard(u)
        for j in range(i + 1, n):
            w = vo.seq[j]
            P[w] -= Rall
        iters.append(IterationRecord(i, v, case, chosen, runner.take_iteration()))
    if debug:
        _check_ordered(inst, ivs, P, Rall)
    bound = inst.alpha + 2 * vo.width - 2
    return _finalize(inst, "ordered-approx", ivs, P, R, iters, runner, bound,
                     "", {"gamma": vo.width}, vo.seq)


def _check_ordered(inst, ivs, P, Rall):
    """Oracle-consistency checks (direct queries, kept out of the log)."""
    for v, iv in ivs.items():
        if not iv <= P[v]:
            raise InvariantError(f"solution part at {v} leaves its claimed part")
        if len(iv) < len(inst.oracles[v].query(P[v])):
            raise InvariantError(f"solution part at {v} undercuts its oracle")
    if not Rall.isdisjoint(union_all(P.values())):
        raise InvariantError("residual intersects the claimed parts")


def decom_approx(inst: Instance, order=None, debug: bool = False) -> SolveTrace:
    """Split the graph into width-many forests, run the bottom-up solver on
    each, and keep the best answer.  Guarantee alpha * width."""
    if not inst.is_graph:
        raise ValueError("decom_approx runs on graph instances; "
                         "use decom_approx_hyper for hypergraphs")
    vo = _resolve_order(inst, order)
    classes = forest_decompose(inst.structure, vo)
    best = None
    best_idx = -1
    subs = []
    for idx, Q in enumerate(classes):
        sub = ordered_approx(inst.restrict(Q), vo.seq, debug=debug)
        subs.append(sub)
        if best is None or len(sub.I) > len(best.I):
            best, best_idx = sub, idx
    bound = inst.alpha * vo.width
    return _merge_decom(inst, "decom-approx", vo, classes, subs, best,
                        best_idx, bound, "", {"gamma": vo.width})


def _merge_decom(inst, algorithm, vo, classes, subs, best, best_idx, bound,
                 bound_note, params):
    if best is None:
        trace = SolveTrace(algorithm, EMPTY, {}, {}, {}, (), bound, bound_note,
                           Fraction(1), params, (), tuple(vo.seq),
                           {"classes": tuple(classes), "chosen": -1})
        if inst.edge_set:
            raise InvariantError(f"{algorithm}: no classes but edges remain")
        return trace
    # the winning subrun covers its class; every other edge goes to the
    # residual of its last vertex so the pieces still tile E minus the parts
    R = dict(best.R)
    for e in inst.edge_set - classes[best_idx]:
        w = max(inst.structure.verts(e), key=lambda u: vo.pos[u])
        R[w] = R.get(w, EMPTY).add(e)
    log = []
    for s in subs:
        log.extend(s.query_log)
    runner = _Runner(inst)
    runner.log = log
    trace = _finalize(inst, algorithm, best.I_parts, best.P, R,
                      best.iterations, runner, bound, bound_note, params,
                      vo.seq, {"classes": tuple(classes), "chosen": best_idx})
    return trace


def bipartite_approx(inst: Instance, k=None, debug: bool = False) -> SolveTrace:
    """Solver for bipartite instances: query oracles on one side only, use
    plain membership tests on the other.  Guarantee alpha + k where k bounds
    the second side's local systems."""
    if inst.bipartition is None:
        raise ValueError("bipartite_approx needs an instance with a bipartition")
    V1, V2 = inst.bipartition
    G = inst.structure
    runner = _Runner(inst)
    pos1 = {v: i for i, v in enumerate(V1)}
    P = {v: inst.incident(v) for v in V1}
    J = {w: EMPTY for w in V2}
    R: Dict[int, EdgeSet] = {}
    Rall = EMPTY
    ivs, iters = {}, []
    for i, v in enumerate(V1):
        iv = runner.query(v, P[v])
        ivs[v] = iv
        for e in iv:
            w = G.other_end(e, v)
            J[w] = J[w].add(e)
            grab = EMPTY
            for f in inst.incident(w):
                if pos1[G.other_end(f, w)] > i \
                        and not inst.systems[w].membership(J[w].add(f)):
                    grab = grab.add(f)
            if grab:
                R[w] = R.get(w, EMPTY) | grab
                Rall |= grab
        for j in range(i + 1, len(V1)):
            P[V1[j]] -= Rall
        iters.append(IterationRecord(i, v, "", None, runner.take_iteration()))
    if debug:
        _check_bipartite(inst, ivs, J, R)
    kval = _resolve_k(inst, k, V2)
    alpha1 = max((inst.oracles[v].alpha for v in V1), default=Fraction(1))
    if kval is None:
        bound, note = None, "no k bound known for the membership side"
    else:
        bound, note = alpha1 + kval, ""
    return _finalize(inst, "bipartite", ivs, P, R, iters, runner, bound, note,
                     {"k": kval, "n1": len(V1)}, V1)


def _resolve_k(inst, k, V2):
    from .systems import ksystem_param_exact
    from .errors import CapExceededError
    if k is not None:
        return Fraction(k)
    if inst.declared_k is not None:
        return inst.declared_k
    try:
        vals = [ksystem_param_exact(inst.systems[w], cap=10) for w in V2]
    except CapExceededError:
        return None
    return max(vals, default=Fraction(1))


def _check_bipartite(inst, ivs, J, R):
    got = union_all(J.values())
    if got != union_all(ivs.values()):
        raise InvariantError("second-side pieces do not partition the solution")
    for w, Jw in J.items():
        if not inst.systems[w].membership(Jw):
            raise InvariantError(f"piece at {w} is dependent")
        for f in R.get(w, EMPTY):
            if inst.systems[w].membership(Jw.add(f)):
                raise InvariantError(
                    f"piece at {w} is not maximal against its residual")


def _condition_holds(structure, vo) -> bool:
    """Every two downward edges at a vertex meet only in that vertex."""
    for v in range(structure.n):
        down = list(vo.down[v])
        for a in range(len(down)):
            va = set(structure.verts(down[a]))
            for b in range(a + 1, len(down)):
                if va & set(structure.verts(down[b])) != {v}:
                    return False
    return True


def ordered_approx_hyper(inst: Instance, order=None,
                         debug: bool = False) -> SolveTrace:
    """Bottom-up solver for hypergraphs (graphs work too and give the same
    run as ordered_approx).  Claimed parts and residual pieces are kept
    disjoint by only ever touching upward edges that are still uncovered.
    Guarantee alpha + delta*(width - 1) when every vertex's downward edges
    pairwise meet only in that vertex; otherwise no bound is certified."""
    G = inst.structure
    vo = _resolve_order(inst, order)
    runner = _Runner(inst)
    n = inst.n
    P = {v: vo.down[v] for v in range(n)}
    R: Dict[int, EdgeSet] = {}
    X = set()
    Rall = EMPTY
    frozen = EMPTY
    ivs, iters = {}, []
    for i, v in enumerate(vo.seq):
        U = vo.up[v]
        Pv = P[v]
        live = U - Rall - frozen
        case, chosen = "1", None
        if not U:
            iv = runner.query(v, Pv)
            Rv = EMPTY
        elif not Pv:
            case = "4"
            iv, Rv = EMPTY, EMPTY
            X.add(v)
        elif not live:
            # every upward edge is already spoken for; claiming one would
            # overlap an earlier part or residual piece
            case = "1x"
            iv = runner.query(v, Pv)
            Rv = EMPTY
        else:
            base = runner.query(v, Pv)
            B = []
            for e in live:
                q = runner.query(v, Pv.add(e))
                if e in q and len(q) > len(base):
                    B.append(e)
            if not B:
                case = "2"
                e = live.min()
                chosen = e
                q = runner.query(v, Pv.add(e))
                iv = q if e not in q else base
                P[v] = Pv.add(e)
                Rv = live.remove(e)
                for w in G.verts(e):
                    if w != v:
                        P[w] = P[w].discard(e)
            else:
                case = "3"
                b = B[0]
                chosen = b
                iv = runner.query(v, Pv.add(b)).discard(b)
                Rv = live.remove(b)
        ivs[v] = iv
        if Rv:
            R[v] = Rv
            Rall |= Rv
        for e in iv:
            for w in G.verts(e):
                if w != v and w in X:
                    cand = vo.up[w] - Rall - frozen - P[v]
                    late = EdgeSet.from_ids(
                        f for f in cand
                        if any(vo.pos[u] > i for u in G.verts(f)))
                    if late:
                        R[w] = late
                        Rall |= late
                    X.discard(w)
        for j in range(i + 1, n):
            w = vo.seq[j]
            P[w] -= Rall
        frozen |= P[v]
        iters.append(IterationRecord(i, v, case, chosen, runner.take_iteration()))
    if debug:
        _check_ordered(inst, ivs, P, Rall)
    gamma, delta = vo.width, G.delta
    cond = _condition_holds(G, vo)
    if cond:
        bound, note = inst.alpha + delta * (gamma - 1), ""
    else:
        bound, note = None, ("downward edges share vertices under this "
                             "order; no guarantee applies")
    return _finalize(inst, "ordered-approx-hyper", ivs, P, R, iters, runner,
                     bound, note,
                     {"gamma": gamma, "delta": delta, "condition": cond},
                     vo.seq)


def decom_approx_hyper(inst: Instance, order=None,
                       debug: bool = False) -> SolveTrace:
    """Split the hypergraph into width-1 classes, run the bottom-up solver
    on each, and keep the best answer.  Guarantee
    alpha * ((delta - 1) * (width - 1) + 1) with no extra condition."""
    G = inst.structure
    vo = _resolve_order(inst, order)
    classes = width1_decompose(G, vo)
    gamma, delta = vo.width, G.delta
    cap = (delta - 1) * (gamma - 1) + 1
    if classes and len(classes) > cap:
        raise InvariantError(
            f"decomposition produced {len(classes)} classes, cap is {cap}")
    best = None
    best_idx = -1
    subs = []
    for idx, Q in enumerate(classes):
        sub = ordered_approx_hyper(inst.restrict(Q), vo.seq, debug=debug)
        if sub.bound is None:
            raise InvariantError("width-1 class missed its guarantee condition")
        subs.append(sub)
        if best is None or len(sub.I) > len(best.I):
            best, best_idx = sub, idx
    bound = inst.alpha * cap
    return _merge_decom(inst, "decom-approx-hyper", vo, classes, subs, best,
                        best_idx, bound, "",
                        {"gamma": gamma, "delta": delta})
