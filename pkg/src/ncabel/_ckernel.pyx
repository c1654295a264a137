# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled term kernel; same contract as ``_pykernel``.

``mul_terms`` packs each monomial into machine words (word letters as
fixed-width digits, central exponents as 8-bit fields) and accumulates
products in an open-addressing table with int64 coefficients.  When a
monomial does not fit the packing or a coefficient would overflow, it falls
back to the generic object loop, so results never depend on the path taken.
"""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc

BACKEND = "compiled"

cdef extern from *:
    """
    static inline int nc_mul_ovf(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int nc_add_ovf(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int nc_mul_ovf(long long a, long long b, long long *r) nogil
    int nc_add_ovf(long long a, long long b, long long *r) nogil

# 8-bit exponent fields in two 64-bit words
cdef enum:
    CENTRAL_FIELDS = 16

COEFF_LIMIT = 2 ** 62

ctypedef struct Packed:
    uint64_t word
    uint64_t c0
    uint64_t c1
    int64_t coeff
    int wlen
    int cmax
    Py_ssize_t left    # index pair of the first product that produced this key
    Py_ssize_t right


cdef inline tuple _merge(tuple a, tuple b):
    cdef Py_ssize_t na = len(a), nb = len(b), i = 0, j = 0, k = 0
    cdef list out
    if na == 0:
        return b
    if nb == 0:
        return a
    out = [None] * (na + nb)
    while i < na and j < nb:
        if <long>a[i] <= <long>b[j]:
            out[k] = a[i]
            i += 1
        else:
            out[k] = b[j]
            j += 1
        k += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nb:
        out[k] = b[j]
        j += 1
        k += 1
    return tuple(out)


def add_terms(dict a, dict b, sign=1):
    cdef dict out = dict(a)
    cdef object key, coeff, value
    for key, coeff in b.items():
        value = out.get(key, 0) + sign * coeff
        if value:
            out[key] = value
        else:
            out.pop(key, None)
    return out


def scale_terms(dict a, k):
    if not k:
        return {}
    return {key: k * coeff for key, coeff in a.items()}


def sum_terms(parts):
    cdef dict out = {}
    cdef dict part
    cdef object key, coeff, prev
    for part in parts:
        for key, coeff in part.items():
            prev = out.get(key)
            out[key] = coeff if prev is None else prev + coeff
    return {key: coeff for key, coeff in out.items() if coeff}


cdef dict _mul_objects(dict a, dict b):
    cdef dict out = {}
    cdef list left = list(a.items())
    cdef list right = list(b.items())
    cdef Py_ssize_t i, j, nl = len(left), nr = len(right)
    cdef tuple ka, kb, ca, wa, key
    cdef object x, y, prev
    for i in range(nl):
        ka = <tuple>left[i][0]
        x = left[i][1]
        ca = <tuple>ka[0]
        wa = <tuple>ka[1]
        for j in range(nr):
            kb = <tuple>right[j][0]
            y = right[j][1]
            key = (_merge(ca, <tuple>kb[0]), wa + <tuple>kb[1])
            prev = out.get(key)
            if prev is None:
                out[key] = x * y
            else:
                out[key] = prev + x * y
    return {key: x for key, x in out.items() if x}


cdef int _scan(dict d, long *max_gen, long *max_central, long *max_len):
    """Record id/length ranges of ``d``; return 0 if some coefficient is too large to pack."""
    cdef tuple key, word, central
    cdef object coeff, g
    for key, coeff in d.items():
        if not -COEFF_LIMIT < coeff < COEFF_LIMIT:
            return 0
        central = <tuple>key[0]
        word = <tuple>key[1]
        if len(word) > max_len[0]:
            max_len[0] = len(word)
        for g in word:
            if <long>g > max_gen[0]:
                max_gen[0] = g
        if len(central) and <long>central[len(central) - 1] > max_central[0]:
            max_central[0] = central[len(central) - 1]
    return 1


cdef int _pack(dict d, Packed *out, int bits) except -1:
    cdef tuple key, word, central
    cdef object coeff
    cdef Py_ssize_t i = 0, j
    cdef long g, run
    cdef uint64_t code
    for key, coeff in d.items():
        central = <tuple>key[0]
        word = <tuple>key[1]
        code = 0
        for j in range(len(word)):
            code = (code << bits) | <uint64_t>(<long>word[j] + 1)
        out[i].word = code
        out[i].wlen = <int>len(word)
        out[i].c0 = 0
        out[i].c1 = 0
        out[i].cmax = 0
        j = 0
        while j < len(central):
            g = central[j]
            run = 1
            while j + run < len(central) and <long>central[j + run] == g:
                run += 1
            if run > 255:
                return 0
            if run > out[i].cmax:
                out[i].cmax = <int>run
            if g < 8:
                out[i].c0 |= (<uint64_t>run) << (8 * g)
            else:
                out[i].c1 |= (<uint64_t>run) << (8 * (g - 8))
            j += run
        out[i].coeff = <int64_t>coeff
        i += 1
    return 1


cdef inline uint64_t _hash(uint64_t w, int wlen, uint64_t c0, uint64_t c1) nogil:
    cdef uint64_t h = w * <uint64_t>0x9E3779B97F4A7C15ULL
    h ^= (c0 + <uint64_t>wlen) * <uint64_t>0xC2B2AE3D27D4EB4FULL
    h ^= c1 * <uint64_t>0x165667B19E3779F9ULL
    h ^= h >> 29
    h *= <uint64_t>0xBF58476D1CE4E5B9ULL
    h ^= h >> 32
    return h


cdef class _Table:
    """Open-addressing map from packed monomials to int64 coefficients."""
    cdef Packed *slots
    cdef char *used
    cdef Py_ssize_t cap, size

    def __cinit__(self, Py_ssize_t hint):
        self.cap = 16
        while self.cap < 2 * hint:
            self.cap <<= 1
        self.slots = <Packed *>malloc(self.cap * sizeof(Packed))
        self.used = <char *>calloc(self.cap, 1)
        self.size = 0
        if self.slots == NULL or self.used == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.slots)
        free(self.used)

    cdef int grow(self) except -1:
        cdef Packed *old = self.slots
        cdef char *old_used = self.used
        cdef Py_ssize_t old_cap = self.cap, i
        self.cap <<= 1
        self.slots = <Packed *>malloc(self.cap * sizeof(Packed))
        self.used = <char *>calloc(self.cap, 1)
        if self.slots == NULL or self.used == NULL:
            raise MemoryError()
        self.size = 0
        for i in range(old_cap):
            if old_used[i]:
                self.insert(old[i].word, old[i].wlen, old[i].c0, old[i].c1, old[i].coeff,
                            old[i].left, old[i].right)
        free(old)
        free(old_used)
        return 0

    cdef int insert(self, uint64_t w, int wlen, uint64_t c0, uint64_t c1, int64_t v,
                    Py_ssize_t left, Py_ssize_t right) except -1:
        """Add ``v`` at the key; return 1 on int64 overflow."""
        cdef Py_ssize_t mask, i
        cdef long long r
        if 2 * (self.size + 1) > self.cap:
            self.grow()
        mask = self.cap - 1
        i = <Py_ssize_t>(_hash(w, wlen, c0, c1) & <uint64_t>mask)
        while self.used[i]:
            if (self.slots[i].word == w and self.slots[i].wlen == wlen
                    and self.slots[i].c0 == c0 and self.slots[i].c1 == c1):
                if nc_add_ovf(self.slots[i].coeff, v, &r):
                    return 1
                self.slots[i].coeff = r
                return 0
            i = (i + 1) & mask
        self.used[i] = 1
        self.slots[i].word = w
        self.slots[i].wlen = wlen
        self.slots[i].c0 = c0
        self.slots[i].c1 = c1
        self.slots[i].coeff = v
        self.slots[i].left = left
        self.slots[i].right = right
        self.size += 1
        return 0


cdef dict _unpack(_Table table, list left, list right):
    """Rebuild tuple keys by concatenating the original keys of each slot's first product."""
    cdef dict out = {}
    cdef Py_ssize_t i
    cdef Packed *s
    cdef tuple ka, kb
    for i in range(table.cap):
        if not table.used[i]:
            continue
        s = &table.slots[i]
        if s.coeff == 0:
            continue
        ka = <tuple>left[s.left]
        kb = <tuple>right[s.right]
        out[(_merge(<tuple>ka[0], <tuple>kb[0]), <tuple>ka[1] + <tuple>kb[1])] = s.coeff
    return out


def mul_terms(dict a, dict b):
    cdef long max_gen = -1, max_central = -1, max_len = 0
    cdef long len_a = 0, len_b = 0
    cdef int bits = 1, cmax_a = 0, cmax_b = 0
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef Packed *pa
    cdef Packed *pb
    cdef _Table table
    cdef long long prod
    cdef int shift, ok = 1
    if na == 0 or nb == 0:
        return {}
    if na * nb < 16:
        return _mul_objects(a, b)
    if not _scan(a, &max_gen, &max_central, &len_a) or not _scan(b, &max_gen, &max_central, &len_b):
        return _mul_objects(a, b)
    while ((<long>1) << bits) <= max_gen + 1:
        bits += 1
    if bits * (len_a + len_b) > 64 or max_central >= CENTRAL_FIELDS:
        return _mul_objects(a, b)
    pa = <Packed *>malloc(na * sizeof(Packed))
    pb = <Packed *>malloc(nb * sizeof(Packed))
    if pa == NULL or pb == NULL:
        free(pa)
        free(pb)
        raise MemoryError()
    try:
        if not _pack(a, pa, bits) or not _pack(b, pb, bits):
            return _mul_objects(a, b)
        for i in range(na):
            if pa[i].cmax > cmax_a:
                cmax_a = pa[i].cmax
        for j in range(nb):
            if pb[j].cmax > cmax_b:
                cmax_b = pb[j].cmax
        if cmax_a + cmax_b > 255:
            return _mul_objects(a, b)
        table = _Table(max(na, nb))
        for i in range(na):
            for j in range(nb):
                if nc_mul_ovf(pa[i].coeff, pb[j].coeff, &prod):
                    ok = 0
                    break
                shift = bits * pb[j].wlen
                # exponent fields add without carry: every field sum stays below 256
                if table.insert((pa[i].word << shift) | pb[j].word if shift < 64 else pb[j].word,
                                pa[i].wlen + pb[j].wlen,
                                pa[i].c0 + pb[j].c0, pa[i].c1 + pb[j].c1, prod, i, j):
                    ok = 0
                    break
            if not ok:
                break
        if not ok:
            return _mul_objects(a, b)
        return _unpack(table, list(a), list(b))
    finally:
        free(pa)
        free(pb)
