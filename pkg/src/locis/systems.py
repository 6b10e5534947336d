"""Local independence systems.

Each system lives on the ground set E_v of one vertex.  All of them are
downward closed and contain the empty set; singletons may still be dependent
(instance construction polices that separately).

Every system exposes:
  membership(J)   exact membership test, J must be a subset of the ground set
  restricted(F)   the restriction family on F ⊆ ground (same kind)
  descriptor()    canonical one-line text form, parseable by fileio
  handle()        cached kernel handle for the hot paths
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from .edgeset import EMPTY, EdgeSet
from .errors import CapExceededError
from . import kernels


class LocalSystem:
    kind = "abstract"

    def __init__(self, ground: EdgeSet):
        self.ground = ground
        self._handle = None

    def _key(self):
        raise NotImplementedError

    def _member(self, J: EdgeSet) -> bool:
        raise NotImplementedError

    def _restricted(self, F: EdgeSet) -> "LocalSystem":
        raise NotImplementedError

    def membership(self, J: EdgeSet) -> bool:
        if not J <= self.ground:
            raise ValueError("membership query outside the ground set")
        return self._member(J)

    def restricted(self, F: EdgeSet) -> "LocalSystem":
        if not F <= self.ground:
            raise ValueError("restriction outside the ground set")
        return self._restricted(F)

    def descriptor(self) -> str:
        raise NotImplementedError

    def handle(self):
        if self._handle is None:
            self._handle = self._make_handle()
        return self._handle

    def _make_handle(self):
        raise NotImplementedError

    @property
    def degree(self) -> int:
        return len(self.ground)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((self.kind, self._key()))

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()!r} on {self.ground!r})"


class FreeSystem(LocalSystem):
    """Every subset of the ground set is independent."""

    kind = "free"

    def _key(self):
        return self.ground

    def _member(self, J):
        return True

    def _restricted(self, F):
        return FreeSystem(F)

    def descriptor(self):
        return "free"

    def _make_handle(self):
        return kernels.system_handle(kernels.FREE, self.ground.mask,
                                     self.ground.ids())


class CardinalityBound(LocalSystem):
    """Independent iff |J| <= b (uniform matroid)."""

    kind = "card"

    def __init__(self, ground: EdgeSet, b: int):
        super().__init__(ground)
        if b < 0:
            raise ValueError("cardinality bound must be non-negative")
        self.b = b

    def _key(self):
        return (self.ground, self.b)

    def _member(self, J):
        return len(J) <= self.b

    def _restricted(self, F):
        return CardinalityBound(F, self.b)

    def descriptor(self):
        return f"card {self.b}"

    def _make_handle(self):
        return kernels.system_handle(kernels.CARD, self.ground.mask,
                                     self.ground.ids(), a=self.b)


class PartitionMatroid(LocalSystem):
    """Ground set split into blocks, each with its own cap: independent iff
    every block contributes at most its cap."""

    kind = "partition"

    def __init__(self, ground: EdgeSet, blocks: Sequence[Tuple[EdgeSet, int]]):
        super().__init__(ground)
        blocks = tuple(sorted(((B, int(cap)) for B, cap in blocks),
                              key=lambda t: t[0].min() if t[0] else -1))
        union = EMPTY
        for B, cap in blocks:
            if not B:
                raise ValueError("empty partition block")
            if cap < 0:
                raise ValueError("negative block cap")
            if not B.isdisjoint(union):
                raise ValueError("partition blocks overlap")
            union |= B
        if union != ground:
            raise ValueError("partition blocks must cover the ground set exactly")
        self.blocks = blocks

    def _key(self):
        return (self.ground, self.blocks)

    def _member(self, J):
        for B, cap in self.blocks:
            if len(J & B) > cap:
                return False
        return True

    def _restricted(self, F):
        kept = [(B & F, cap) for B, cap in self.blocks if B & F]
        return PartitionMatroid(F, kept)

    def descriptor(self):
        parts = [",".join(str(e) for e in B) + f":{cap}" for B, cap in self.blocks]
        return ("partition " + " ".join(parts)) if parts else "partition"

    def _make_handle(self):
        return kernels.system_handle(
            kernels.PARTITION, self.ground.mask, self.ground.ids(),
            blocks=tuple((B.mask, cap) for B, cap in self.blocks))


class TimedMatching(LocalSystem):
    """Each edge carries a set of time labels; a set is independent iff its
    edges have pairwise disjoint label sets.  Edges with no labels conflict
    with nothing."""

    kind = "timed"

    def __init__(self, ground: EdgeSet, labels: Dict[int, FrozenSet[int]]):
        super().__init__(ground)
        if sorted(labels) != list(ground.ids()):
            raise ValueError("labels must cover the ground set exactly")
        self.labels = {e: frozenset(labels[e]) for e in ground}
        for e, ls in self.labels.items():
            for t in ls:
                if not isinstance(t, int) or t < 0:
                    raise ValueError(f"bad time label {t!r} on edge {e}")

    def _key(self):
        return (self.ground, tuple(sorted(self.labels[e]) for e in self.ground))

    def _member(self, J):
        seen = set()
        for e in J:
            ls = self.labels[e]
            if seen & ls:
                return False
            seen |= ls
        return True

    def _restricted(self, F):
        return TimedMatching(F, {e: self.labels[e] for e in F})

    def descriptor(self):
        parts = []
        for e in self.ground:
            ls = ",".join(str(t) for t in sorted(self.labels[e]))
            parts.append(f"{e}:{ls}")
        return ("timed " + " ".join(parts)) if parts else "timed"

    def _make_handle(self):
        edges = list(self.ground.ids())
        conflict = []
        for i, e in enumerate(edges):
            mask = 0
            for j, f in enumerate(edges):
                if j != i and self.labels[e] & self.labels[f]:
                    mask |= 1 << f
            conflict.append(mask)
        return kernels.system_handle(kernels.TIMED, self.ground.mask,
                                     self.ground.ids(), conflict=tuple(conflict))


class SignSystem(LocalSystem):
    """The ground set is split into a positive and a negative class; a set is
    independent iff it stays inside one class."""

    kind = "sign"

    def __init__(self, ground: EdgeSet, pos: EdgeSet, neg: EdgeSet):
        super().__init__(ground)
        if (pos | neg) != ground or not pos.isdisjoint(neg):
            raise ValueError("pos/neg must partition the ground set")
        self.pos = pos
        self.neg = neg

    def _key(self):
        return (self.ground, self.pos)

    def _member(self, J):
        return J <= self.pos or J <= self.neg

    def _restricted(self, F):
        return SignSystem(F, self.pos & F, self.neg & F)

    def descriptor(self):
        p = ",".join(str(e) for e in self.pos) or "-"
        n = ",".join(str(e) for e in self.neg) or "-"
        return f"sign {p} | {n}"

    def _make_handle(self):
        return kernels.system_handle(kernels.SIGN, self.ground.mask,
                                     self.ground.ids(), a=self.pos.mask,
                                     b=self.neg.mask)


class ExplicitSystem(LocalSystem):
    """Membership given by an explicit list of independent sets.  The list
    must contain the empty set and be downward closed.  Capped at ground
    sets of 20 edges (the table is dense over subsets)."""

    kind = "explicit"
    MAX_DEGREE = 20

    def __init__(self, ground: EdgeSet, members: Iterable[EdgeSet]):
        super().__init__(ground)
        if len(ground) > self.MAX_DEGREE:
            raise ValueError(f"explicit system limited to {self.MAX_DEGREE} edges")
        edges = list(ground.ids())
        place = {e: i for i, e in enumerate(edges)}
        size = 1 << len(edges)
        # packed bit table over compressed local masks, kernel layout
        table = bytearray((size + 7) >> 3)
        for J in members:
            if not J <= ground:
                raise ValueError("member outside the ground set")
            c = 0
            for e in J:
                c |= 1 << place[e]
            table[c >> 3] |= 1 << (c & 7)
        if not table[0] & 1:
            raise ValueError("explicit system must contain the empty set")
        for c in range(1, size):
            if (table[c >> 3] >> (c & 7)) & 1:
                rest = c ^ (c & -c)
                if not (table[rest >> 3] >> (rest & 7)) & 1:
                    raise ValueError("explicit system is not downward closed")
        self._table = bytes(table)
        self._place = place
        self._edges = edges

    def _key(self):
        return (self.ground, self._table)

    def _compress(self, J: EdgeSet) -> int:
        c = 0
        for e in J:
            c |= 1 << self._place[e]
        return c

    def _expand(self, c: int) -> EdgeSet:
        return EdgeSet.from_ids(
            self._edges[i] for i in range(len(self._edges)) if c >> i & 1)

    def _member(self, J):
        c = self._compress(J)
        return bool((self._table[c >> 3] >> (c & 7)) & 1)

    def _restricted(self, F):
        keep = self._compress(F)
        members = []
        for c in range(1 << len(self._edges)):
            if (self._table[c >> 3] >> (c & 7)) & 1 and c & ~keep == 0:
                members.append(self._expand(c))
        return ExplicitSystem(F, members)

    def members(self):
        for c in range(1 << len(self._edges)):
            if (self._table[c >> 3] >> (c & 7)) & 1:
                yield self._expand(c)

    def descriptor(self):
        # hex masks use actual edge ids, ascending
        masks = " ".join(hex(J.mask) for J in self.members())
        return "explicit " + masks

    def _make_handle(self):
        return kernels.system_handle(kernels.EXPLICIT, self.ground.mask,
                                     self.ground.ids(), table=self._table)


def restriction_family(system: LocalSystem, F: EdgeSet) -> LocalSystem:
    """The family I[F] = {J ∈ I | J ⊆ F} as a system on ground set F."""
    return system.restricted(F)


def greedy_maximal(system: LocalSystem, F: EdgeSet,
                   pref: Optional[Sequence[int]] = None) -> EdgeSet:
    """Greedily grow a maximal member of I[F], scanning edges in preference
    order (ascending id by default)."""
    if not F <= system.ground:
        raise ValueError("query outside the ground set")
    if pref is None:
        order = list(F.ids())
    else:
        order = [e for e in pref if e in F]
        if len(order) != len(F):
            raise ValueError("preference order must cover the query set")
    impl, h = system.handle()
    S = 0
    for e in order:
        if impl.sys_add_ok(h, S, e):
            S |= 1 << e
    return EdgeSet(S)


def ksystem_param_exact(system: LocalSystem, cap: int = 18) -> Fraction:
    """Exact k parameter of the system: the largest ratio |maximal| /
    |minimal maximal| over all restrictions.  Always at least 1; equals 1
    exactly for matroids.  Exponential in the degree, hence the cap."""
    deg = len(system.ground)
    if deg > cap:
        raise CapExceededError(
            f"k parameter scan needs degree <= {cap}, got {deg}")
    if deg == 0:
        return Fraction(1)
    table = kernels.local_table(system.handle())
    num, den = kernels.ksystem_scan(table, deg)
    return Fraction(num, den)
