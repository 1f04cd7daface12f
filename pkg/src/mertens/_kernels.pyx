# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Signatures mirror :mod:`mertens._pykernels`."""

import numpy as np

from libc.stdint cimport int8_t, int64_t, uint8_t, uint64_t
from libc.math cimport sqrt, cbrt

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"
    int clzll "__builtin_clzll"(unsigned long long) nogil

BACKEND = "compiled"

cdef int64_t TWO20 = 1 << 20


cdef inline uint64_t mdiv(uint64_t n, uint64_t mul, uint64_t add, uint8_t shift) noexcept nogil:
    return (<uint64_t>(((<u128>n) * mul + add) >> 64)) >> shift


cdef inline int64_t isqrt64(int64_t v) noexcept nogil:
    cdef int64_t r = <int64_t>sqrt(<double>v)
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


cdef inline int64_t icbrt_ceil64(int64_t v) noexcept nogil:
    cdef int64_t k = <int64_t>cbrt(<double>v)
    if k < 0:
        k = 0
    while k * k * k < v:
        k += 1
    while k > 0 and (k - 1) * (k - 1) * (k - 1) >= v:
        k -= 1
    return k


def magic_div_array(uint64_t[::1] n, uint64_t mul, uint64_t add, uint8_t shift):
    cdef Py_ssize_t i, L = n.shape[0]
    out = np.empty(L, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    with nogil:
        for i in range(L):
            o[i] = mdiv(n[i], mul, add, shift)
    return out


def sieve_segment(uint8_t[::1] buf, int64_t start, const int64_t[::1] primes,
                  const uint8_t[::1] logs, Py_ssize_t log_from, Py_ssize_t sub_len,
                  const uint64_t[::1] mmul, const uint64_t[::1] madd, const uint8_t[::1] mshift):
    """Add prime logs, zero square multiples, then clear bytes without bit 7."""
    cdef Py_ssize_t L = buf.shape[0], P = primes.shape[0]
    cdef Py_ssize_t i, j, lo, hi
    cdef int64_t p, rem, p2, end = start + L - 1
    cdef uint8_t lg
    if L == 0:
        return
    nxt_arr = np.empty(max(P, 1), dtype=np.int64)
    cdef int64_t[::1] nxt = nxt_arr
    if sub_len <= 0:
        sub_len = L
    with nogil:
        for i in range(P):
            p = primes[i]
            # offset of the first multiple of p at or after start
            rem = <int64_t>(<uint64_t>start - mdiv(<uint64_t>start, mmul[i], madd[i], mshift[i]) * <uint64_t>p)
            nxt[i] = (p - rem) % p
        lo = 0
        while lo < L:
            hi = lo + sub_len
            if hi > L:
                hi = L
            for i in range(log_from, P):
                p = primes[i]
                lg = logs[i]
                j = nxt[i]
                while j < hi:
                    buf[j] += lg
                    j += p
                nxt[i] = j
            lo = hi
        for i in range(P):
            p = primes[i]
            p2 = p * p
            if p2 > end:
                break
            j = (p2 - start % p2) % p2
            while j < L:
                buf[j] = 0
                j += p2
        for j in range(L):
            if not (buf[j] & 0x80):
                buf[j] = 0


def sieve_bucket(uint8_t[::1] buf, int64_t start, const int64_t[::1] primes,
                 int64_t[::1] cof, const uint8_t[::1] logs):
    """Apply scheduled primes to their multiples ``cof*p`` inside the block.

    ``cof`` is advanced in place to the first cofactor past the block.
    Square multiples are cleared; call :func:`normalize` afterwards.
    """
    cdef Py_ssize_t L = buf.shape[0], i
    cdef int64_t p, c, m, end = start + L - 1
    cdef uint8_t lg
    with nogil:
        for i in range(primes.shape[0]):
            p = primes[i]
            c = cof[i]
            lg = logs[i]
            m = c * p
            while m <= end:
                if c % p == 0:
                    buf[m - start] = 0
                else:
                    buf[m - start] += lg
                c += 1
                m += p
            cof[i] = c


def normalize(uint8_t[::1] buf):
    cdef Py_ssize_t j
    with nogil:
        for j in range(buf.shape[0]):
            if not (buf[j] & 0x80):
                buf[j] = 0


def classify_segment(const uint8_t[::1] buf, int8_t[::1] out, int64_t start):
    cdef Py_ssize_t i, L = buf.shape[0]
    cdef int64_t n, thr
    cdef uint8_t v, s
    with nogil:
        for i in range(L):
            v = buf[i]
            if not (v & 0x80):
                out[i] = 0
                continue
            n = start + i
            s = v & 0x7F
            thr = 63 - clzll(<unsigned long long>n) - 5
            if n > TWO20:
                thr -= 2
            if s < thr:
                out[i] = 2 * (s & 1) - 1
            else:
                out[i] = 1 - 2 * (s & 1)


def accumulate(const int8_t[::1] mu, int64_t start, int64_t M, int64_t mx, int64_t mn,
               int64_t stride, list zeros, list extrema, list samples):
    """Running Mertens sum over one block; events are appended to the lists."""
    cdef Py_ssize_t i, L = mu.shape[0]
    cdef int64_t n, srem
    cdef int8_t m
    srem = (start - 1) % stride
    for i in range(L):
        m = mu[i]
        n = start + i
        if m != 0:
            M += m
            if M > mx:
                mx = M
                extrema.append((n, M))
            elif M < mn:
                mn = M
                extrema.append((n, M))
        if M == 0:
            zeros.append(n)
        srem += 1
        if srem == stride:
            srem = 0
            samples.append((n, M))
    return M, mx, mn


def values_at(const int8_t[::1] mu, int64_t M0, const int64_t[::1] offsets):
    """``M0 + cumsum(mu)`` evaluated at sorted in-block offsets."""
    cdef Py_ssize_t i = 0, j = 0, K = offsets.shape[0], L = mu.shape[0]
    cdef int64_t M = M0
    out = np.empty(K, dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for j in range(K):
            while i <= offsets[j] and i < L:
                M += mu[i]
                i += 1
            o[j] = M
    return out


def s_small(const int64_t[::1] ys, const int8_t[::1] mu, const int64_t[::1] Msmall,
            const uint64_t[::1] mmul, const uint64_t[::1] madd, const uint8_t[::1] mshift,
            int64_t[::1] counters):
    """``1 + kappa*M(nu) - sum_{k<=nu} (y//k) mu(k)`` for every y.

    counters: [true divisions, products, skipped quotients, walk steps].
    """
    cdef Py_ssize_t i, Y = ys.shape[0]
    cdef int64_t y, nu, kap, kc, kend, k, q, r, d, s, k1, t
    cdef int64_t K = mmul.shape[0]
    cdef int64_t ndiv = 0, nprod = 0, nskip = 0, nstep = 0
    cdef int8_t m
    out = np.empty(Y, dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for i in range(Y):
            y = ys[i]
            nu = isqrt64(y)
            kap = y // (nu + 1)
            ndiv += 1
            kc = icbrt_ceil64(2 * y)
            kend = kc - 1
            if kend > nu:
                kend = nu
            if kend > K - 1:
                kend = K - 1
            s = 0
            for k in range(1, kend + 1):
                m = mu[k]
                if m == 0:
                    nskip += 1
                    continue
                if k == 1:
                    q = y
                else:
                    q = <int64_t>mdiv(<uint64_t>y, mmul[k], madd[k], mshift[k])
                s += m * q
                nprod += 1
            k = kend + 1
            if k <= nu:
                q = y // k
                ndiv += 1
                r = y - q * k
                d = 0
                while True:
                    m = mu[k]
                    if m != 0:
                        s += m * q
                        nprod += 1
                    if k == nu:
                        break
                    k1 = k + 1
                    r = r - q + d * k1
                    while r < 0:
                        d += 1
                        r += k1
                    while r >= k1:
                        d -= 1
                        r -= k1
                    q -= d
                    k = k1
                    nstep += 1
            o[i] = 1 + kap * Msmall[nu] - s
    counters[0] += ndiv
    counters[1] += nprod
    counters[2] += nskip
    counters[3] += nstep
    return out


cdef class SState:
    """Per-y cursors for the ``sum_{y/u < k <= kappa} M(y//k)`` part."""

    cdef public object ys, k, q, r, d, kstop, kc, acc
    cdef public int64_t u

    def __init__(self, ys, int64_t u):
        self.ys = np.ascontiguousarray(ys, dtype=np.int64)
        self.u = u
        n = len(self.ys)
        self.k = np.zeros(n, dtype=np.int64)
        self.q = np.zeros(n, dtype=np.int64)
        self.r = np.zeros(n, dtype=np.int64)
        self.d = np.zeros(n, dtype=np.int64)
        self.kstop = np.zeros(n, dtype=np.int64)
        self.kc = np.zeros(n, dtype=np.int64)
        self.acc = np.zeros(n, dtype=np.int64)


def s_cursor_init(ys, int64_t u, int64_t[::1] counters):
    st = SState(ys, u)
    cdef int64_t[::1] Y = st.ys, K = st.k, Q = st.q, R = st.r, KS = st.kstop, KC = st.kc
    cdef Py_ssize_t i
    cdef int64_t y, nu, kap, ks, ndiv = 0
    with nogil:
        for i in range(Y.shape[0]):
            y = Y[i]
            nu = isqrt64(y)
            kap = y // (nu + 1)
            ks = y // u
            ndiv += 2
            KS[i] = ks
            KC[i] = icbrt_ceil64(2 * y)
            if kap <= ks:
                K[i] = ks
                continue
            K[i] = kap
            Q[i] = y // kap
            R[i] = y - Q[i] * kap
            ndiv += 1
    counters[0] += ndiv
    return st


def s_block(SState st, const int64_t[::1] Mblock, int64_t lo,
            const uint64_t[::1] mmul, const uint64_t[::1] madd, const uint8_t[::1] mshift,
            int64_t[::1] counters):
    """Consume one block of M values ``Mblock[m - lo]`` for ``lo <= m < hi``."""
    cdef int64_t[::1] Y = st.ys, K = st.k, Q = st.q, R = st.r, D = st.d
    cdef int64_t[::1] KS = st.kstop, KC = st.kc, A = st.acc
    cdef int64_t hi = lo + Mblock.shape[0]
    cdef int64_t TK = mmul.shape[0]
    cdef Py_ssize_t i
    cdef int64_t y, k, q, q1, r, d, a, k1, ks, nstep = 0
    with nogil:
        for i in range(Y.shape[0]):
            k = K[i]
            ks = KS[i]
            if k <= ks:
                continue
            q = Q[i]
            if q >= hi:
                continue
            y = Y[i]
            r = R[i]
            d = D[i]
            a = A[i]
            while q < hi:
                a += Mblock[q - lo]
                if k - 1 <= ks:
                    k = ks
                    break
                k1 = k - 1
                if k1 < KC[i] and k1 < TK:
                    q1 = <int64_t>mdiv(<uint64_t>y, mmul[k1], madd[k1], mshift[k1])
                    d = q1 - q
                    q = q1
                    r = y - q * k1
                else:
                    r = r + q - d * k1
                    while r < 0:
                        d -= 1
                        r += k1
                    while r >= k1:
                        d += 1
                        r -= k1
                    q += d
                k = k1
                nstep += 1
            K[i] = k
            Q[i] = q
            R[i] = r
            D[i] = d
            A[i] = a
    counters[3] += nstep


def s_finish(SState st):
    cdef int64_t[::1] K = st.k, KS = st.kstop
    cdef Py_ssize_t i
    for i in range(K.shape[0]):
        if K[i] > KS[i]:
            raise RuntimeError("quotient cursor did not reach its stop; M blocks missing")
    return st.acc
