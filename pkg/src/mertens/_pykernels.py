"""Pure-Python/numpy versions of the hot loops in ``_kernels.pyx``.

Same call signatures and results; used when the extension is not built or
when ``MERTENS_BACKEND=python`` is set.
"""

import numpy as np

BACKEND = "python"

_TWO20 = 1 << 20


def magic_div_array(n, mul, add, shift):
    return np.array([((int(v) * int(mul) + int(add)) >> 64) >> int(shift) for v in n],
                    dtype=np.uint64)


def sieve_segment(buf, start, primes, logs, log_from, sub_len, mmul, madd, mshift):
    L = len(buf)
    if L == 0:
        return
    end = start + L - 1
    for i, p in enumerate(primes.tolist()):
        if i >= log_from:
            buf[(-start) % p::p] += logs[i]
    for p in primes.tolist():
        p2 = p * p
        if p2 > end:
            break
        buf[(-start) % p2::p2] = 0
    buf[buf < 0x80] = 0


def sieve_bucket(buf, start, primes, cof, logs):
    end = start + len(buf) - 1
    for i, p in enumerate(primes.tolist()):
        c = int(cof[i])
        lg = int(logs[i])
        m = c * p
        while m <= end:
            if c % p == 0:
                buf[m - start] = 0
            else:
                buf[m - start] += lg
            c += 1
            m += p
        cof[i] = c


def normalize(buf):
    buf[buf < 0x80] = 0


def _floor_log2(n):
    # exact for n < 2**53
    return np.frexp(n.astype(np.float64))[1].astype(np.int64) - 1


def classify_segment(buf, out, start):
    L = len(buf)
    n = np.arange(start, start + L, dtype=np.int64)
    s = (buf & 0x7F).astype(np.int64)
    thr = _floor_log2(n) - 5 - 2 * (n > _TWO20)
    lsb = s & 1
    mu = np.where(s < thr, 2 * lsb - 1, 1 - 2 * lsb)
    mu[(buf & 0x80) == 0] = 0
    out[:] = mu


def accumulate(mu, start, M, mx, mn, stride, zeros, extrema, samples):
    L = len(mu)
    if L == 0:
        return M, mx, mn
    Mv = M + np.cumsum(mu, dtype=np.int64)
    zeros.extend((start + np.flatnonzero(Mv == 0)).tolist())
    hi = np.maximum.accumulate(Mv)
    prev_hi = np.empty(L, dtype=np.int64)
    prev_hi[0] = mx
    prev_hi[1:] = np.maximum(hi[:-1], mx)
    lo = np.minimum.accumulate(Mv)
    prev_lo = np.empty(L, dtype=np.int64)
    prev_lo[0] = mn
    prev_lo[1:] = np.minimum(lo[:-1], mn)
    idx = np.flatnonzero((Mv > prev_hi) | (Mv < prev_lo))
    extrema.extend(zip((start + idx).tolist(), Mv[idx].tolist()))
    first = (-start) % stride
    sidx = np.arange(first, L, stride)
    samples.extend(zip((start + sidx).tolist(), Mv[sidx].tolist()))
    return int(Mv[-1]), max(mx, int(hi[-1])), min(mn, int(lo[-1]))


def values_at(mu, M0, offsets):
    c = M0 + np.cumsum(mu, dtype=np.int64)
    return c[np.asarray(offsets, dtype=np.int64)]


def _isqrt_arr(ys):
    from math import isqrt
    return np.array([isqrt(int(y)) for y in ys], dtype=np.int64)


def s_small(ys, mu, Msmall, mmul, madd, mshift, counters):
    out = np.empty(len(ys), dtype=np.int64)
    for i, y in enumerate(ys.tolist()):
        from math import isqrt
        nu = isqrt(y)
        kap = y // (nu + 1)
        ks = np.arange(1, nu + 1, dtype=np.int64)
        m = mu[1:nu + 1].astype(np.int64)
        nzk = m != 0
        s = int(((y // ks[nzk]) * m[nzk]).sum())
        counters[0] += 1 + int(nzk.sum())
        counters[1] += int(nzk.sum())
        counters[2] += int((~nzk).sum())
        out[i] = 1 + kap * int(Msmall[nu]) - s
    return out


class SState:
    def __init__(self, ys, u):
        from math import isqrt
        self.ys = np.ascontiguousarray(ys, dtype=np.int64)
        self.u = int(u)
        ylist = self.ys.tolist()
        self.kstop = np.array([y // self.u for y in ylist], dtype=np.int64)
        kap = np.array([y // (isqrt(y) + 1) for y in ylist], dtype=np.int64)
        self.k = np.maximum(kap, self.kstop)
        self.acc = np.zeros(len(ylist), dtype=np.int64)


def s_cursor_init(ys, u, counters):
    st = SState(ys, u)
    counters[0] += 2 * len(st.ys)
    return st


def s_block(st, Mblock, lo, mmul, madd, mshift, counters):
    hi = lo + len(Mblock)
    for i, y in enumerate(st.ys.tolist()):
        k = int(st.k[i])
        ks = int(st.kstop[i])
        if k <= ks:
            continue
        # smallest k with y // k < hi
        klow = max(ks + 1, y // hi + 1)
        if klow > k:
            continue
        kk = np.arange(klow, k + 1, dtype=np.int64)
        st.acc[i] += int(Mblock[y // kk - lo].sum())
        counters[0] += 1 + len(kk)
        st.k[i] = klow - 1
        counters[3] += len(kk)


def s_finish(st):
    if np.any(st.k > st.kstop):
        raise RuntimeError("quotient cursor did not reach its stop; M blocks missing")
    return st.acc
