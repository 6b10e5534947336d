"""Pure-Python compute kernels over integer bitmasks.

This module and the compiled extension `locis._kernel` implement the same
contract; `locis.kernels` picks one at import time.  Handles returned by
make_system / make_instance are opaque to callers.

All maximization routines return the lexicographically least optimum: the
DFS visits edges in ascending id order, tries inclusion before exclusion,
and only replaces the incumbent on strict size improvement.
"""

from __future__ import annotations

FREE = 0
CARD = 1
PARTITION = 2
TIMED = 3
SIGN = 4
EXPLICIT = 5

BACKEND = "python"


def make_system(kind, ground, ground_bits, a, b, blocks, conflict, table):
    return (kind, ground, tuple(ground_bits), a, b, tuple(blocks),
            tuple(conflict), bytes(table))


def _compress(S, ground_bits):
    cm = 0
    for i, g in enumerate(ground_bits):
        if (S >> g) & 1:
            cm |= 1 << i
    return cm


def sys_add_ok(h, S, e):
    """Is S + e still a member, given member S (S subset of ground, e outside S)?"""
    kind = h[0]
    if kind == FREE:
        return True
    if kind == CARD:
        return S.bit_count() < h[3]
    if kind == PARTITION:
        bit = 1 << e
        for bmask, cap in h[5]:
            if bmask & bit:
                return (S & bmask).bit_count() < cap
        return False
    if kind == TIMED:
        i = (h[1] & ((1 << e) - 1)).bit_count()
        return S & h[6][i] == 0
    if kind == SIGN:
        S2 = S | (1 << e)
        return S2 & ~h[3] == 0 or S2 & ~h[4] == 0
    # explicit
    cm = _compress(S | (1 << e), h[2])
    return (h[7][cm >> 3] >> (cm & 7)) & 1 == 1


def sys_member(h, J):
    """Full membership test for J subset of ground."""
    kind = h[0]
    if kind == FREE:
        return True
    if kind == CARD:
        return J.bit_count() <= h[3]
    if kind == PARTITION:
        for bmask, cap in h[5]:
            if (J & bmask).bit_count() > cap:
                return False
        return True
    if kind == TIMED:
        conflict = h[6]
        ground = h[1]
        m = J
        while m:
            low = m & -m
            i = (ground & (low - 1)).bit_count()
            if (J & conflict[i]) & ~low:
                return False
            m ^= low
        return True
    if kind == SIGN:
        return J & ~h[3] == 0 or J & ~h[4] == 0
    cm = _compress(J, h[2])
    return (h[7][cm >> 3] >> (cm & 7)) & 1 == 1


def local_max(h, F):
    """Lexicographically least maximum member of the system restricted to F."""
    kind = h[0]
    if kind == FREE:
        return F
    if kind == CARD:
        # lowest b bits of F
        out = 0
        need = h[3]
        m = F
        while m and need:
            low = m & -m
            out |= low
            m ^= low
            need -= 1
        return out
    if kind == PARTITION:
        # greedy ascending is optimal and lex-least for matroids
        out = 0
        m = F
        while m:
            low = m & -m
            e = low.bit_length() - 1
            if sys_add_ok(h, out, e):
                out |= low
            m ^= low
        return out
    if kind == SIGN:
        p = F & h[3]
        q = F & h[4]
        cp = p.bit_count()
        cq = q.bit_count()
        if cp != cq:
            return p if cp > cq else q
        if not F:
            return 0
        low = F & -F
        return p if p & low else q
    return _dfs_max(h, F)


def _dfs_max(h, F):
    bits = []
    m = F
    while m:
        low = m & -m
        bits.append(low.bit_length() - 1)
        m ^= low
    nb = len(bits)
    best = 0
    best_size = -1

    def rec(i, cur, size):
        nonlocal best, best_size
        if size + (nb - i) <= best_size:
            return
        if i == nb:
            best = cur
            best_size = size
            return
        e = bits[i]
        if sys_add_ok(h, cur, e):
            rec(i + 1, cur | (1 << e), size + 1)
        rec(i + 1, cur, size)

    rec(0, 0, 0)
    return best


def local_table(h):
    """Membership bit table over compressed local masks (bit i of a mask
    stands for ground_bits[i])."""
    ground_bits = h[2]
    deg = len(ground_bits)
    size = 1 << deg
    out = bytearray((size + 7) >> 3)
    out[0] |= 1
    if h[0] == EXPLICIT:
        return bytearray(h[7])
    # grow masks one lowest bit at a time; downward closure makes this sound
    decomp = [0] * size
    for cm in range(1, size):
        lowc = cm & -cm
        i = lowc.bit_length() - 1
        prev = cm ^ lowc
        d = decomp[prev] | (1 << ground_bits[i])
        decomp[cm] = d
        if (out[prev >> 3] >> (prev & 7)) & 1 and sys_add_ok(h, decomp[prev], ground_bits[i]):
            out[cm >> 3] |= 1 << (cm & 7)
    return out


def make_instance(systems, everts, m_top):
    return (tuple(systems), tuple(everts), m_top)


def inst_add_ok(H, S, e):
    systems = H[0]
    for v in H[1][e]:
        h = systems[v]
        if not sys_add_ok(h, S & h[1], e):
            return False
    return True


def global_max(H, F):
    """Exact maximum independent subset of F in the global system.

    Returns (best mask, DFS nodes explored)."""
    bits = []
    m = F
    while m:
        low = m & -m
        bits.append(low.bit_length() - 1)
        m ^= low
    nb = len(bits)
    best = 0
    best_size = -1
    nodes = 0

    def rec(i, cur, size):
        nonlocal best, best_size, nodes
        nodes += 1
        if size + (nb - i) <= best_size:
            return
        if i == nb:
            best = cur
            best_size = size
            return
        e = bits[i]
        if inst_add_ok(H, cur, e):
            rec(i + 1, cur | (1 << e), size + 1)
        rec(i + 1, cur, size)

    rec(0, 0, 0)
    return best, nodes


def global_table(H, universe):
    """Global-membership bit table over compressed masks of the universe."""
    bits = []
    m = universe
    while m:
        low = m & -m
        bits.append(low.bit_length() - 1)
        m ^= low
    deg = len(bits)
    size = 1 << deg
    out = bytearray((size + 7) >> 3)
    out[0] |= 1
    decomp = [0] * size
    for cm in range(1, size):
        lowc = cm & -cm
        i = lowc.bit_length() - 1
        prev = cm ^ lowc
        decomp[cm] = decomp[prev] | (1 << bits[i])
        if (out[prev >> 3] >> (prev & 7)) & 1 and inst_add_ok(H, decomp[prev], bits[i]):
            out[cm >> 3] |= 1 << (cm & 7)
    return out


def ksystem_scan(table, nbits):
    """Largest ratio (max maximal size / min maximal size) over all
    restrictions F, from a membership bit table over nbits positions.

    Returns (num, den) in lowest terms not required; den >= 1.  Restrictions
    whose only maximal member is empty contribute nothing (downward closure
    makes the empty set maximal only when it is the sole member)."""
    full = (1 << nbits) - 1
    knum, kden = 1, 1
    for F in range(full, 0, -1):
        max_sz = -1
        min_sz = -1
        S = F
        while True:
            if (table[S >> 3] >> (S & 7)) & 1:
                rest = F & ~S
                maximal = True
                m = rest
                while m:
                    low = m & -m
                    T = S | low
                    if (table[T >> 3] >> (T & 7)) & 1:
                        maximal = False
                        break
                    m ^= low
                if maximal:
                    sz = S.bit_count()
                    if max_sz < 0 or sz > max_sz:
                        max_sz = sz
                    if min_sz < 0 or sz < min_sz:
                        min_sz = sz
            if S == 0:
                break
            S = (S - 1) & F
        if max_sz > 0 and max_sz * kden > knum * min_sz:
            knum, kden = max_sz, min_sz
    return knum, kden
