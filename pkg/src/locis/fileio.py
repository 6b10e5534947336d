"""Text formats for instances, oracle scripts, solve results and timed
graphs.

All formats are line based with a versioned header and an `end` line.
Files written by save_* round-trip byte-exactly through the matching
load_* (canonical ordering: ascending ids everywhere).

Instance file:

    locis instance v1
    kind graph
    n 3
    edge 0 0 1
    edge 1 1 2
    system 0 free
    system 1 card 1
    system 2 free
    bipartition 0,2 | 1
    k 2
    end

`bipartition` and `k` lines are optional.  System descriptors are the
ones produced by each system's descriptor() method:

    free
    card <b>
    partition <ids>:<cap> <ids>:<cap> ...
    timed <edge>:<labels> ...
    sign <ids> | <ids>           ("-" for an empty side)
    explicit <hex mask> ...      (all independent sets, ascending)

Oracle script file (vertices with no map lines keep exact oracles; the
fallback backs scripted vertices on unscripted queries):

    locis oracles v1
    alpha 3/2
    fallback none
    0: {0,2} -> {0}
    0: {} -> {}
    end

Result file (`query` lines appear only when saved with audit=True):

    locis result v1
    algorithm greedy
    alpha 1
    size 2
    independent {0,3}
    bound 5/2
    order 0 2 1
    part 0 {0}
    part 2 {3}
    residual {1,2}
    query 0 {0,1} -> {0}
    end

Timed graph file ("-" for an empty label set):

    locis timed v1
    n 3
    edge 0 0 1 : 0,2
    edge 1 1 2 : -
    end
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .edgeset import EMPTY, EdgeSet, union_all
from .errors import FormatError
from .model import Graph, Hypergraph, Instance
from .oracle import ExhaustiveOracle, GreedyPrefOracle, ScriptedOracle
from .systems import (
    CardinalityBound,
    ExplicitSystem,
    FreeSystem,
    PartitionMatroid,
    SignSystem,
    TimedMatching,
)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {s!r}") from None


def _fmt_ids(ids) -> str:
    return ",".join(str(i) for i in ids)


def _parse_ids(s: str):
    if s == "":
        return ()
    try:
        return tuple(int(t) for t in s.split(","))
    except ValueError:
        raise FormatError(f"bad id list {s!r}") from None


def _fmt_set(S: EdgeSet) -> str:
    return "{" + _fmt_ids(S) + "}"


def _parse_set(s: str) -> EdgeSet:
    if not (s.startswith("{") and s.endswith("}")):
        raise FormatError(f"bad edge set {s!r}")
    return EdgeSet.from_ids(_parse_ids(s[1:-1]))


class _Lines:
    """Cursor over the non-blank lines of a document."""

    def __init__(self, text: str, header: str):
        self.lines = [l.rstrip("\n") for l in text.splitlines()]
        self.lines = [l for l in self.lines if l.strip()]
        self.pos = 0
        if self.take() != header:
            raise FormatError(f"expected header {header!r}")

    def take(self) -> str:
        if self.pos >= len(self.lines):
            raise FormatError("unexpected end of file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def peek(self) -> Optional[str]:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def expect_end(self):
        if self.take() != "end":
            raise FormatError("expected 'end'")
        if self.pos != len(self.lines):
            raise FormatError("trailing content after 'end'")

    def keyword(self, key: str) -> str:
        line = self.take()
        if line != key and not line.startswith(key + " "):
            raise FormatError(f"expected {key!r} line, got {line!r}")
        return line[len(key) :].lstrip()


# ---------------------------------------------------------------------------
# system descriptors


def parse_descriptor(desc: str, ground: EdgeSet):
    parts = desc.split()
    if not parts:
        raise FormatError("empty system descriptor")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "free":
            if args:
                raise FormatError("free takes no arguments")
            return FreeSystem(ground)
        if kind == "card":
            if len(args) != 1:
                raise FormatError("card takes one argument")
            return CardinalityBound(ground, int(args[0]))
        if kind == "partition":
            blocks = []
            for a in args:
                ids, _, cap = a.rpartition(":")
                blocks.append((EdgeSet.from_ids(_parse_ids(ids)), int(cap)))
            return PartitionMatroid(ground, blocks)
        if kind == "timed":
            labels = {}
            for a in args:
                e, _, ls = a.partition(":")
                labels[int(e)] = frozenset(_parse_ids(ls))
            return TimedMatching(ground, labels)
        if kind == "sign":
            joined = " ".join(args)
            p, sep, n = joined.partition(" | ")
            if not sep:
                raise FormatError(f"sign needs 'pos | neg', got {desc!r}")
            pos = EMPTY if p == "-" else EdgeSet.from_ids(_parse_ids(p))
            neg = EMPTY if n == "-" else EdgeSet.from_ids(_parse_ids(n))
            return SignSystem(ground, pos, neg)
        if kind == "explicit":
            members = [EdgeSet(int(a, 16)) for a in args]
            return ExplicitSystem(ground, members)
    except FormatError:
        raise
    except (ValueError, KeyError) as exc:
        raise FormatError(f"bad descriptor {desc!r}: {exc}") from None
    raise FormatError(f"unknown system kind {kind!r}")


# ---------------------------------------------------------------------------
# instances


def save_instance(inst: Instance) -> str:
    st = inst.structure
    out = ["locis instance v1"]
    out.append("kind " + ("graph" if st.is_graph else "hypergraph"))
    out.append(f"n {st.n}")
    for e in st.edge_ids:
        out.append(f"edge {e} " + " ".join(str(v) for v in st.verts(e)))
    for v in range(st.n):
        out.append(f"system {v} " + inst.systems[v].descriptor())
    if inst.bipartition is not None:
        v1, v2 = inst.bipartition
        out.append(
            "bipartition "
            + (_fmt_ids(v1) or "-")
            + " | "
            + (_fmt_ids(v2) or "-")
        )
    if inst.declared_k is not None:
        out.append("k " + format_rational(inst.declared_k))
    out.append("end")
    return "\n".join(out) + "\n"


def load_instance(text: str) -> Instance:
    doc = _Lines(text, "locis instance v1")
    kind = doc.keyword("kind")
    if kind not in ("graph", "hypergraph"):
        raise FormatError(f"unknown structure kind {kind!r}")
    try:
        n = int(doc.keyword("n"))
    except ValueError:
        raise FormatError("bad n line") from None
    edges = []
    ids = []
    while (line := doc.peek()) is not None and line.startswith("edge "):
        doc.take()
        toks = line.split()
        try:
            ids.append(int(toks[1]))
            edges.append(tuple(int(t) for t in toks[2:]))
        except (ValueError, IndexError):
            raise FormatError(f"bad edge line {line!r}") from None
    cls = Graph if kind == "graph" else Hypergraph
    try:
        st = cls(n, edges, ids)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    systems = {}
    while (line := doc.peek()) is not None and line.startswith("system "):
        doc.take()
        toks = line.split(None, 2)
        if len(toks) < 3:
            raise FormatError(f"bad system line {line!r}")
        try:
            v = int(toks[1])
        except ValueError:
            raise FormatError(f"bad system line {line!r}") from None
        if not 0 <= v < n or v in systems:
            raise FormatError(f"bad or repeated system vertex {v}")
        systems[v] = parse_descriptor(toks[2], st.incident(v))
    if len(systems) != n:
        raise FormatError("need exactly one system line per vertex")
    bip = None
    if (line := doc.peek()) is not None and line.startswith("bipartition "):
        doc.take()
        body = line[len("bipartition ") :]
        p, sep, q = body.partition(" | ")
        if not sep:
            raise FormatError(f"bad bipartition line {line!r}")
        v1 = () if p == "-" else _parse_ids(p)
        v2 = () if q == "-" else _parse_ids(q)
        bip = (v1, v2)
    k = None
    if (line := doc.peek()) is not None and line.startswith("k "):
        doc.take()
        k = parse_rational(line[2:])
    doc.expect_end()
    try:
        return Instance(st, [systems[v] for v in range(n)], bipartition=bip,
                        declared_k=k)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# oracle scripts


def save_oracle_script(inst: Instance) -> str:
    """Serialize scripted oracles.  Exact oracles are implied for unscripted
    vertices; anything else is not representable and raises ValueError."""
    alpha = None
    fallback = None
    maps = []
    for v, o in enumerate(inst.oracles):
        if isinstance(o, ScriptedOracle):
            if alpha is None:
                alpha = o.alpha
            elif o.alpha != alpha:
                raise ValueError("scripted oracles disagree on alpha")
            fb = o.fallback
            if fb is None:
                name = "none"
            elif isinstance(fb, ExhaustiveOracle):
                name = "exhaustive"
            elif isinstance(fb, GreedyPrefOracle) and fb.pref is None:
                name = "greedy"
            else:
                raise ValueError(f"fallback oracle at vertex {v} is not representable")
            if fallback is None:
                fallback = name
            elif fallback != name:
                raise ValueError("scripted oracles disagree on fallback")
            for F in sorted(o.answers, key=lambda S: S.mask):
                maps.append(f"{v}: {_fmt_set(F)} -> {_fmt_set(o.answers[F])}")
        elif not isinstance(o, ExhaustiveOracle):
            raise ValueError(f"oracle at vertex {v} is not representable")
    out = ["locis oracles v1"]
    out.append("alpha " + format_rational(alpha if alpha is not None else 1))
    out.append("fallback " + (fallback if fallback is not None else "none"))
    out.extend(maps)
    out.append("end")
    return "\n".join(out) + "\n"


def load_oracle_script(text: str, inst: Instance) -> Instance:
    """New instance over the same structure and systems, with the scripted
    oracles described by the file attached."""
    doc = _Lines(text, "locis oracles v1")
    alpha = parse_rational(doc.keyword("alpha"))
    fallback = doc.keyword("fallback")
    if fallback not in ("none", "exhaustive", "greedy"):
        raise FormatError(f"unknown fallback {fallback!r}")
    maps: Dict[int, Dict[EdgeSet, EdgeSet]] = {}
    while (line := doc.peek()) is not None and line != "end":
        doc.take()
        head, sep, rest = line.partition(": ")
        if not sep:
            raise FormatError(f"bad map line {line!r}")
        try:
            v = int(head)
        except ValueError:
            raise FormatError(f"bad map line {line!r}") from None
        if not 0 <= v < inst.n:
            raise FormatError(f"map line for unknown vertex {v}")
        q, sep, a = rest.partition(" -> ")
        if not sep:
            raise FormatError(f"bad map line {line!r}")
        entry = maps.setdefault(v, {})
        F = _parse_set(q)
        if F in entry:
            raise FormatError(f"duplicate map entry for vertex {v}, query {q}")
        entry[F] = _parse_set(a)
    doc.expect_end()
    oracles = []
    for v in range(inst.n):
        system = inst.systems[v]
        if v in maps:
            if fallback == "none":
                fb = None
            elif fallback == "exhaustive":
                fb = ExhaustiveOracle(system)
            else:
                fb = GreedyPrefOracle(system)
            try:
                oracles.append(ScriptedOracle(system, maps[v], fallback=fb,
                                              alpha=alpha))
            except ValueError as exc:
                raise FormatError(str(exc)) from None
        else:
            oracles.append(ExhaustiveOracle(system))
    return Instance(inst.structure, inst.systems, oracles=oracles,
                    bipartition=inst.bipartition, declared_k=inst.declared_k)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class ResultFile:
    """Parsed solve result; verify(inst) re-checks it against an instance."""

    algorithm: str
    alpha: Fraction
    size: int
    independent: EdgeSet
    bound: Optional[Fraction]
    note: str
    order: Optional[Tuple[int, ...]]
    parts: Dict[int, EdgeSet]
    residual: EdgeSet
    audit: Tuple[Tuple[int, EdgeSet, EdgeSet], ...]

    def verify(self, inst: Instance):
        if self.size != len(self.independent):
            raise FormatError("size line disagrees with the independent set")
        if not inst.independent(self.independent):
            raise FormatError("recorded set is not independent in the instance")
        for v, s in self.parts.items():
            if not 0 <= v < inst.n or not s <= inst.incident(v):
                raise FormatError(f"part at vertex {v} is not local")
        if union_all(self.parts.values()) != self.independent:
            raise FormatError("parts do not union to the independent set")
        if self.residual & self.independent:
            raise FormatError("residual overlaps the independent set")
        if not self.residual <= inst.edge_set:
            raise FormatError("residual contains unknown edges")


def save_result(trace, audit: bool = False) -> str:
    out = ["locis result v1"]
    out.append(f"algorithm {trace.algorithm}")
    out.append("alpha " + format_rational(trace.alpha))
    out.append(f"size {len(trace.I)}")
    out.append("independent " + _fmt_set(trace.I))
    if trace.bound is None:
        out.append("bound none")
    else:
        out.append("bound " + format_rational(trace.bound))
    if trace.bound_note:
        out.append("note " + trace.bound_note)
    if trace.order is not None:
        joined = " ".join(str(v) for v in trace.order)
        out.append("order " + joined if joined else "order")
    for v in sorted(trace.I_parts):
        out.append(f"part {v} " + _fmt_set(trace.I_parts[v]))
    out.append("residual " + _fmt_set(trace.residual))
    if audit:
        for v, F, ans in trace.query_log:
            out.append(f"query {v} {_fmt_set(F)} -> {_fmt_set(ans)}")
    out.append("end")
    return "\n".join(out) + "\n"


def load_result(text: str, inst: Optional[Instance] = None) -> ResultFile:
    doc = _Lines(text, "locis result v1")
    algorithm = doc.keyword("algorithm")
    alpha = parse_rational(doc.keyword("alpha"))
    try:
        size = int(doc.keyword("size"))
    except ValueError:
        raise FormatError("bad size line") from None
    independent = _parse_set(doc.keyword("independent"))
    braw = doc.keyword("bound")
    bound = None if braw == "none" else parse_rational(braw)
    note = ""
    if (line := doc.peek()) is not None and line.startswith("note "):
        doc.take()
        note = line[len("note ") :]
    order = None
    if (line := doc.peek()) is not None and (
        line == "order" or line.startswith("order ")
    ):
        doc.take()
        try:
            order = tuple(int(t) for t in line.split()[1:])
        except ValueError:
            raise FormatError(f"bad order line {line!r}") from None
    parts = {}
    while (line := doc.peek()) is not None and line.startswith("part "):
        doc.take()
        toks = line.split()
        if len(toks) != 3:
            raise FormatError(f"bad part line {line!r}")
        try:
            v = int(toks[1])
        except ValueError:
            raise FormatError(f"bad part line {line!r}") from None
        if v in parts:
            raise FormatError(f"repeated part vertex {v}")
        parts[v] = _parse_set(toks[2])
    residual = _parse_set(doc.keyword("residual"))
    audit = []
    while (line := doc.peek()) is not None and line.startswith("query "):
        doc.take()
        toks = line.split()
        if len(toks) != 5 or toks[3] != "->":
            raise FormatError(f"bad query line {line!r}")
        try:
            v = int(toks[1])
        except ValueError:
            raise FormatError(f"bad query line {line!r}") from None
        audit.append((v, _parse_set(toks[2]), _parse_set(toks[4])))
    doc.expect_end()
    res = ResultFile(algorithm, alpha, size, independent, bound, note, order,
                     parts, residual, tuple(audit))
    if inst is not None:
        res.verify(inst)
    return res


# ---------------------------------------------------------------------------
# timed graphs


def save_timed(G: Graph, labels: Dict[int, frozenset]) -> str:
    out = ["locis timed v1", f"n {G.n}"]
    for e in G.edge_ids:
        u, w = G.verts(e)
        ls = _fmt_ids(sorted(labels[e])) or "-"
        out.append(f"edge {e} {u} {w} : {ls}")
    out.append("end")
    return "\n".join(out) + "\n"


def load_timed(text: str):
    doc = _Lines(text, "locis timed v1")
    try:
        n = int(doc.keyword("n"))
    except ValueError:
        raise FormatError("bad n line") from None
    edges = []
    ids = []
    labels = {}
    while (line := doc.peek()) is not None and line.startswith("edge "):
        doc.take()
        toks = line.split()
        if len(toks) != 6 or toks[4] != ":":
            raise FormatError(f"bad edge line {line!r}")
        try:
            e = int(toks[1])
            edges.append((int(toks[2]), int(toks[3])))
        except ValueError:
            raise FormatError(f"bad edge line {line!r}") from None
        ids.append(e)
        labels[e] = frozenset() if toks[5] == "-" else frozenset(_parse_ids(toks[5]))
    doc.expect_end()
    try:
        return Graph(n, edges, ids), labels
    except ValueError as exc:
        raise FormatError(str(exc)) from None
