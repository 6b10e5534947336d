# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled compute kernels over unsigned 64-bit masks.

Mirror of locis._kernel_py: same functions, same answers bit for bit
(including DFS node counts and lexicographic tie-breaking).  Callers route
anything with edge ids >= 64 to the pure module, so masks fit one word.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    #define POPCLL(x) __builtin_popcountll(x)
    #define CTZLL(x) __builtin_ctzll(x)
    """
    int POPCLL(unsigned long long x) nogil
    int CTZLL(unsigned long long x) nogil

FREE = 0
CARD = 1
PARTITION = 2
TIMED = 3
SIGN = 4
EXPLICIT = 5

BACKEND = "cython"

cdef int K_FREE = 0, K_CARD = 1, K_PARTITION = 2, K_TIMED = 3, K_SIGN = 4, \
    K_EXPLICIT = 5

cdef unsigned long long ONE = 1


cdef class System:
    cdef tuple _f
    cdef int kind
    cdef unsigned long long ground
    cdef int nground
    cdef int gbits[64]
    cdef unsigned long long a
    cdef unsigned long long b
    cdef int nblocks
    cdef unsigned long long bmask[64]
    cdef int bcap[64]
    cdef unsigned long long conf[64]
    cdef bytes table

    def __cinit__(self, kind, ground, ground_bits, a, b, blocks, conflict,
                  table):
        self._f = (kind, ground, tuple(ground_bits), a, b, tuple(blocks),
                   tuple(conflict), bytes(table))
        self.kind = kind
        self.ground = ground
        self.nground = len(self._f[2])
        cdef int i
        for i in range(self.nground):
            self.gbits[i] = self._f[2][i]
        self.a = a
        self.b = b
        self.nblocks = len(self._f[5])
        for i in range(self.nblocks):
            self.bmask[i] = self._f[5][i][0]
            self.bcap[i] = self._f[5][i][1]
        for i in range(len(self._f[6])):
            self.conf[i] = self._f[6][i]
        self.table = self._f[7]

    def fields(self):
        return self._f


def make_system(kind, ground, ground_bits, a, b, blocks, conflict, table):
    if len(tuple(ground_bits)) > 64 or len(tuple(conflict)) > 64 \
            or len(tuple(blocks)) > 64:
        raise ValueError("compiled kernel limited to 64 positions")
    return System(kind, ground, ground_bits, a, b, blocks, conflict, table)


cdef unsigned long long _compress(System h, unsigned long long S):
    cdef unsigned long long cm = 0
    cdef int i
    for i in range(h.nground):
        if (S >> h.gbits[i]) & 1:
            cm |= ONE << i
    return cm


cdef bint _add_ok(System h, unsigned long long S, int e):
    cdef int kind = h.kind
    cdef unsigned long long bit, S2, cm
    cdef int i
    cdef const unsigned char* tbl
    if kind == K_FREE:
        return True
    if kind == K_CARD:
        return POPCLL(S) < <int> h.a
    if kind == K_PARTITION:
        bit = ONE << e
        for i in range(h.nblocks):
            if h.bmask[i] & bit:
                return POPCLL(S & h.bmask[i]) < h.bcap[i]
        return False
    if kind == K_TIMED:
        i = POPCLL(h.ground & ((ONE << e) - 1))
        return S & h.conf[i] == 0
    if kind == K_SIGN:
        S2 = S | (ONE << e)
        return S2 & ~h.a == 0 or S2 & ~h.b == 0
    cm = _compress(h, S | (ONE << e))
    tbl = h.table
    return (tbl[cm >> 3] >> (cm & 7)) & 1 == 1


cdef bint _member(System h, unsigned long long J):
    cdef int kind = h.kind
    cdef unsigned long long m, low, cm
    cdef int i
    cdef const unsigned char* tbl
    if kind == K_FREE:
        return True
    if kind == K_CARD:
        return POPCLL(J) <= <int> h.a
    if kind == K_PARTITION:
        for i in range(h.nblocks):
            if POPCLL(J & h.bmask[i]) > h.bcap[i]:
                return False
        return True
    if kind == K_TIMED:
        m = J
        while m:
            low = m & (0 - m)
            i = POPCLL(h.ground & (low - 1))
            if (J & h.conf[i]) & ~low:
                return False
            m ^= low
        return True
    if kind == K_SIGN:
        return J & ~h.a == 0 or J & ~h.b == 0
    cm = _compress(h, J)
    tbl = h.table
    return (tbl[cm >> 3] >> (cm & 7)) & 1 == 1


def sys_add_ok(System h, S, e):
    """Is S + e still a member, given member S (S subset of ground, e outside S)?"""
    return _add_ok(h, S, e)


def sys_member(System h, J):
    """Full membership test for J subset of ground."""
    return _member(h, J)


cdef void _dfs_sys(System h, int* bits, int nb, int i, unsigned long long cur,
                   int size, unsigned long long* best, int* best_size):
    if size + (nb - i) <= best_size[0]:
        return
    if i == nb:
        best[0] = cur
        best_size[0] = size
        return
    cdef int e = bits[i]
    if _add_ok(h, cur, e):
        _dfs_sys(h, bits, nb, i + 1, cur | (ONE << e), size + 1, best,
                 best_size)
    _dfs_sys(h, bits, nb, i + 1, cur, size, best, best_size)


def local_max(System h, F):
    """Lexicographically least maximum member of the system restricted to F."""
    cdef unsigned long long FF = F
    cdef unsigned long long out, m, low, p, q
    cdef unsigned long long best = 0
    cdef int need, e, cp, cq, nb, best_size
    cdef int bits[64]
    cdef int kind = h.kind
    if kind == K_FREE:
        return FF
    if kind == K_CARD:
        out = 0
        need = <int> h.a
        m = FF
        while m and need:
            low = m & (0 - m)
            out |= low
            m ^= low
            need -= 1
        return out
    if kind == K_PARTITION:
        out = 0
        m = FF
        while m:
            low = m & (0 - m)
            e = CTZLL(low)
            if _add_ok(h, out, e):
                out |= low
            m ^= low
        return out
    if kind == K_SIGN:
        p = FF & h.a
        q = FF & h.b
        cp = POPCLL(p)
        cq = POPCLL(q)
        if cp != cq:
            return p if cp > cq else q
        if not FF:
            return 0
        low = FF & (0 - FF)
        return p if p & low else q
    nb = 0
    m = FF
    while m:
        low = m & (0 - m)
        bits[nb] = CTZLL(low)
        nb += 1
        m ^= low
    best_size = -1
    _dfs_sys(h, bits, nb, 0, 0, 0, &best, &best_size)
    return best


def local_table(System h):
    """Membership bit table over compressed local masks (bit i of a mask
    stands for ground_bits[i])."""
    cdef int deg = h.nground
    cdef unsigned long long size = ONE << deg
    cdef bytearray out = bytearray((size + 7) >> 3)
    out[0] |= 1
    if h.kind == K_EXPLICIT:
        return bytearray(h.table)
    cdef unsigned long long* decomp = <unsigned long long*> malloc(
        size * sizeof(unsigned long long))
    if decomp == NULL:
        raise MemoryError()
    cdef unsigned char[::1] ob = out
    cdef unsigned long long cm, lowc, prev, d
    cdef int i
    try:
        decomp[0] = 0
        for cm in range(1, size):
            lowc = cm & (0 - cm)
            i = CTZLL(lowc)
            prev = cm ^ lowc
            d = decomp[prev] | (ONE << h.gbits[i])
            decomp[cm] = d
            if (ob[prev >> 3] >> (prev & 7)) & 1 and \
                    _add_ok(h, decomp[prev], h.gbits[i]):
                ob[cm >> 3] |= 1 << (cm & 7)
    finally:
        free(decomp)
    return out


cdef class InstanceH:
    cdef tuple systems
    cdef tuple everts
    cdef int m_top
    cdef int* ev_off
    cdef int* ev_vert

    def __cinit__(self, systems, everts, m_top):
        self.systems = tuple(systems)
        self.everts = tuple(everts)
        self.m_top = m_top
        cdef int total = 0
        for vs in self.everts:
            total += len(vs)
        self.ev_off = <int*> malloc((m_top + 1) * sizeof(int))
        self.ev_vert = <int*> malloc((total if total else 1) * sizeof(int))
        if self.ev_off == NULL or self.ev_vert == NULL:
            raise MemoryError()
        cdef int e, pos = 0
        for e in range(m_top):
            self.ev_off[e] = pos
            for v in self.everts[e]:
                self.ev_vert[pos] = v
                pos += 1
        self.ev_off[m_top] = pos

    def __dealloc__(self):
        if self.ev_off != NULL:
            free(self.ev_off)
        if self.ev_vert != NULL:
            free(self.ev_vert)


def make_instance(systems, everts, m_top):
    return InstanceH(systems, everts, m_top)


cdef bint _inst_add_ok(InstanceH H, unsigned long long S, int e):
    cdef int i
    cdef System h
    for i in range(H.ev_off[e], H.ev_off[e + 1]):
        h = <System> H.systems[H.ev_vert[i]]
        if not _add_ok(h, S & h.ground, e):
            return False
    return True


def inst_add_ok(InstanceH H, S, e):
    return _inst_add_ok(H, S, e)


cdef void _dfs_inst(InstanceH H, int* bits, int nb, int i,
                    unsigned long long cur, int size,
                    unsigned long long* best, int* best_size,
                    long long* nodes):
    nodes[0] += 1
    if size + (nb - i) <= best_size[0]:
        return
    if i == nb:
        best[0] = cur
        best_size[0] = size
        return
    cdef int e = bits[i]
    if _inst_add_ok(H, cur, e):
        _dfs_inst(H, bits, nb, i + 1, cur | (ONE << e), size + 1, best,
                  best_size, nodes)
    _dfs_inst(H, bits, nb, i + 1, cur, size, best, best_size, nodes)


def global_max(InstanceH H, F):
    """Exact maximum independent subset of F in the global system.

    Returns (best mask, DFS nodes explored)."""
    cdef unsigned long long FF = F
    cdef unsigned long long m, low
    cdef int bits[64]
    cdef int nb = 0
    m = FF
    while m:
        low = m & (0 - m)
        bits[nb] = CTZLL(low)
        nb += 1
        m ^= low
    cdef unsigned long long best = 0
    cdef int best_size = -1
    cdef long long nodes = 0
    _dfs_inst(H, bits, nb, 0, 0, 0, &best, &best_size, &nodes)
    return best, nodes


def global_table(InstanceH H, universe):
    """Global-membership bit table over compressed masks of the universe."""
    cdef unsigned long long uni = universe
    cdef unsigned long long m, low
    cdef int bits[64]
    cdef int deg = 0
    m = uni
    while m:
        low = m & (0 - m)
        bits[deg] = CTZLL(low)
        deg += 1
        m ^= low
    cdef unsigned long long size = ONE << deg
    cdef bytearray out = bytearray((size + 7) >> 3)
    out[0] |= 1
    cdef unsigned long long* decomp = <unsigned long long*> malloc(
        size * sizeof(unsigned long long))
    if decomp == NULL:
        raise MemoryError()
    cdef unsigned char[::1] ob = out
    cdef unsigned long long cm, lowc, prev
    cdef int i
    try:
        decomp[0] = 0
        for cm in range(1, size):
            lowc = cm & (0 - cm)
            i = CTZLL(lowc)
            prev = cm ^ lowc
            decomp[cm] = decomp[prev] | (ONE << bits[i])
            if (ob[prev >> 3] >> (prev & 7)) & 1 and \
                    _inst_add_ok(H, decomp[prev], bits[i]):
                ob[cm >> 3] |= 1 << (cm & 7)
    finally:
        free(decomp)
    return out


def ksystem_scan(table, nbits):
    """Largest ratio (max maximal size / min maximal size) over all
    restrictions F, from a membership bit table over nbits positions.

    Returns (num, den) in lowest terms not required; den >= 1.  Restrictions
    whose only maximal member is empty contribute nothing (downward closure
    makes the empty set maximal only when it is the sole member)."""
    cdef const unsigned char[::1] tbl = table
    cdef int nb = nbits
    cdef unsigned long long full = (ONE << nb) - 1
    cdef long long knum = 1, kden = 1
    cdef unsigned long long F, S, T, rest, m, low
    cdef int max_sz, min_sz, sz
    cdef bint maximal
    F = full
    while F > 0:
        max_sz = -1
        min_sz = -1
        S = F
        while True:
            if (tbl[S >> 3] >> (S & 7)) & 1:
                rest = F & ~S
                maximal = True
                m = rest
                while m:
                    low = m & (0 - m)
                    T = S | low
                    if (tbl[T >> 3] >> (T & 7)) & 1:
                        maximal = False
                        break
                    m ^= low
                if maximal:
                    sz = POPCLL(S)
                    if max_sz < 0 or sz > max_sz:
                        max_sz = sz
                    if min_sz < 0 or sz < min_sz:
                        min_sz = sz
            if S == 0:
                break
            S = (S - 1) & F
        if max_sz > 0 and max_sz * kden > knum * min_sz:
            knum = max_sz
            kden = min_sz
        F -= 1
    return knum, kden
