"""Segmented log-space sieve for the Mobius function and the Mertens function.

Every ``n`` in a block gets one byte.  Bit 7 starts set and is cleared when a
prime square divides ``n``; the low seven bits accumulate
``floor(log2 p) | 1`` over the sieving primes dividing ``n``, so bit 0 is the
parity of the number of those primes.  A log sum that falls short of
``floor(log2 n) - 5`` (``- 7`` above ``2**20``) means one prime factor above
the sieving bound was never seen, which flips the parity.

The primes 2, 3, 5, 7, 11 and the squares 4 and 9 are applied once to a
pattern of length 13860 that is tiled into every block.
"""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from mertens import _backend
from mertens.checkpoint import (
    Checkpoint,
    config_hash,
    format_events,
    read_checkpoint,
    read_events,
    write_checkpoint,
)
from mertens.errors import CheckpointError, OutOfRangeError, PreconditionError
from mertens.magic import magic_table

WHEEL_PERIOD = 13860  # 2*2*3*3*5*7*11
WHEEL_PRIMES = (2, 3, 5, 7, 11)
WHEEL_SQUARES = (4, 9)
PRESET_BLOCK_LEN = 8_728_473_600
DEFAULT_BLOCK_LEN = WHEEL_PERIOD * 4096
DEFAULT_STRIDE = 10**8
DEFAULT_SUB_LEN = 1 << 18
VALID_LIMIT = 10**16
# The short-sum threshold misclassifies some n <= 2**20 whose unseen prime is
# at most 191, so every prime below this bound is always sieved.
ALWAYS_SIEVE_BELOW = 256
_CHUNK = 1 << 22


def primes_up_to(n: int) -> np.ndarray:
    """All primes ``<= n`` as int64 (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p::2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def default_threads() -> int:
    return max(1, int(os.environ.get("MERTENS_THREADS", "1")))


@dataclass
class LogTable:
    """Sieving primes up to ``bound`` and their byte logs ``floor(log2 p) | 1``."""

    primes: np.ndarray
    entries: np.ndarray
    bound: int
    _magic: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def magic(self):
        if self._magic is None:
            self._magic = magic_table(self.primes)
        return self._magic

    def upto(self, bound: int) -> int:
        """Number of primes ``<= bound``."""
        return int(np.searchsorted(self.primes, bound, side="right"))


def log_table(bound: int) -> LogTable:
    bound = max(int(bound), ALWAYS_SIEVE_BELOW)
    primes = primes_up_to(bound)
    entries = np.array([(p.bit_length() - 1) | 1 for p in primes.tolist()], dtype=np.uint8)
    return LogTable(primes, entries, bound)


def sieve_bound(end: int) -> int:
    return max(isqrt(end), ALWAYS_SIEVE_BELOW)


_WHEEL = None


def presieve_wheel() -> np.ndarray:
    """Sieve state of one wheel period; index ``i`` stands for ``n = i (mod 13860)``."""
    global _WHEEL
    if _WHEEL is None:
        w = np.full(WHEEL_PERIOD, 0x80, dtype=np.uint8)
        for p in WHEEL_PRIMES:
            w[::p] += (p.bit_length() - 1) | 1
        for sq in WHEEL_SQUARES:
            w[::sq] = 0
        w[w < 0x80] = 0
        w.setflags(write=False)
        _WHEEL = w
    return _WHEEL


@dataclass
class SieveBlock:
    start: int
    values: np.ndarray
    phase: str = "raw"

    @property
    def end(self) -> int:
        return self.start + len(self.values) - 1


def raw_block(start: int, length: int, wheel: bool = True) -> SieveBlock:
    if start < 1 or length < 0:
        raise PreconditionError("blocks start at n >= 1")
    if not wheel:
        return SieveBlock(start, np.full(length, 0x80, dtype=np.uint8))
    off = start % WHEEL_PERIOD
    reps = -(-(off + length) // WHEEL_PERIOD)
    vals = np.tile(presieve_wheel(), reps)[off:off + length].copy()
    return SieveBlock(start, vals)


def sieve_block(block: SieveBlock, logs: LogTable, *, wheel: bool = True,
                sub_len: int = DEFAULT_SUB_LEN, kernels=None) -> SieveBlock:
    """Run the prime loop over a raw block in place (phase becomes ``logged``)."""
    if block.phase != "raw":
        raise PreconditionError(f"block must be raw, got {block.phase}")
    k = kernels or _backend.kernels
    end = block.end
    need = sieve_bound(end)
    if logs.bound < need:
        raise PreconditionError(f"prime table covers {logs.bound}, block ending at {end} needs {need}")
    lo = 2 if wheel else 0  # skip 2 and 3; 5, 7, 11 only zero their squares
    hi = logs.upto(need)
    primes = logs.primes[lo:hi]
    log_from = 3 if wheel else 0
    mul, add, shift = logs.magic
    k.sieve_segment(block.values, block.start, primes, logs.entries[lo:hi], log_from, sub_len,
                    mul[lo:hi], add[lo:hi], shift[lo:hi])
    block.phase = "logged"
    return block


def classify(value: int, n: int) -> int:
    """Mobius value of ``n`` from its sieved byte."""
    if not 1 <= n <= VALID_LIMIT:
        raise OutOfRangeError(f"n={n} outside [1, 1e16] where the threshold rule is proven")
    if not value & 0x80:
        return 0
    s = value & 0x7F
    thr = n.bit_length() - 1 - 5 - (2 if n > (1 << 20) else 0)
    lsb = s & 1
    return 2 * lsb - 1 if s < thr else 1 - 2 * lsb


def classify_block(block: SieveBlock, kernels=None) -> SieveBlock:
    if block.phase != "logged":
        raise PreconditionError(f"block must be logged, got {block.phase}")
    if block.end > VALID_LIMIT:
        raise OutOfRangeError(f"block reaches {block.end} > 1e16")
    k = kernels or _backend.kernels
    out = block.values.view(np.int8)
    k.classify_segment(block.values, out, block.start)
    return SieveBlock(block.start, out, "classified")


def mobius_block(start: int, length: int, logs: LogTable | None = None, *,
                 wheel: bool = True, kernels=None) -> np.ndarray:
    """``mu(n)`` for ``start <= n < start + length`` as int8."""
    end = start + length - 1
    if logs is None or logs.bound < sieve_bound(end):
        logs = log_table(sieve_bound(end))
    b = sieve_block(raw_block(start, length, wheel), logs, wheel=wheel, kernels=kernels)
    return classify_block(b, kernels=kernels).values


def _ordered_map(fn, items, threads):
    if threads <= 1:
        for it in items:
            yield fn(it)
        return
    with ThreadPoolExecutor(threads) as ex:
        pending = []
        for it in items:
            pending.append(ex.submit(fn, it))
            if len(pending) > threads:
                yield pending.pop(0).result()
        for f in pending:
            yield f.result()


def iter_mobius_blocks(lo: int, hi: int, block_len: int, *, threads: int = 1,
                       logs: LogTable | None = None, kernels=None):
    """Yield ``(start, mu)`` covering ``lo <= n <= hi`` in order."""
    if hi < lo:
        return
    if logs is None:
        logs = log_table(sieve_bound(hi))
    starts = range(lo, hi + 1, block_len)

    def work(s):
        return s, mobius_block(s, min(block_len, hi - s + 1), logs, kernels=kernels)

    yield from _ordered_map(work, starts, threads)


def mertens_values(points, block_len: int = WHEEL_PERIOD * 256, *, threads: int = 1,
                   kernels=None) -> dict[int, int]:
    """Exact ``M(n)`` at each requested point, by one sieve pass to the largest."""
    pts = sorted(set(int(p) for p in points))
    if not pts:
        return {}
    if pts[0] < 0:
        raise PreconditionError("points must be >= 0")
    k = kernels or _backend.kernels
    out = {p: 0 for p in pts if p == 0}
    pts = [p for p in pts if p > 0]
    arr = np.array(pts, dtype=np.int64)
    M = 0
    for start, mu in iter_mobius_blocks(1, pts[-1], block_len, threads=threads, kernels=kernels):
        end = start + len(mu) - 1
        a, b = np.searchsorted(arr, [start, end], side="left")[0], np.searchsorted(arr, end, side="right")
        if b > a:
            vals = k.values_at(mu, M, arr[a:b] - start)
            out.update(zip(pts[a:b], vals.tolist()))
        M += int(mu.sum(dtype=np.int64))
    return out


@dataclass
class MertensStats:
    """Events recorded while scanning ``M(n)``."""

    limit: int
    stride: int
    extrema: list = field(default_factory=list)
    zeros: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    n_last: int = 0
    M_last: int = 0
    max: int = 0
    min: int = 0

    @property
    def running(self):
        return (self.n_last, self.M_last, self.max, self.min)

    @property
    def complete(self) -> bool:
        return self.n_last == self.limit


def _check_scan_args(limit, stride, block_len):
    if limit < 1:
        raise PreconditionError("limit must be >= 1")
    if limit > VALID_LIMIT:
        raise OutOfRangeError("limit above 1e16")
    if stride < 1:
        raise PreconditionError("stride must be >= 1")
    if block_len < 1 or block_len % WHEEL_PERIOD:
        raise PreconditionError(f"block_len must be a positive multiple of {WHEEL_PERIOD}")


class BucketSchedule:
    """Block index -> primes (with their next cofactor) due in that block.

    A prime ``p`` whose next unprocessed multiple is ``c*p`` lives in the
    bucket of the block holding ``c*p`` and nowhere else.
    """

    def __init__(self, block_len: int, limit: int):
        self.block_len = block_len
        self.limit = limit
        self.buckets: dict[int, list[tuple[np.ndarray, np.ndarray]]] = defaultdict(list)

    def block_of(self, n):
        return (n - 1) // self.block_len

    def push(self, primes: np.ndarray, cof: np.ndarray) -> None:
        if len(primes) == 0:
            return
        nxt = cof * primes
        keep = nxt <= self.limit
        primes, cof, nxt = primes[keep], cof[keep], nxt[keep]
        if len(primes) == 0:
            return
        blocks = self.block_of(nxt)
        order = np.argsort(blocks, kind="stable")
        blocks, primes, cof = blocks[order], primes[order], cof[order]
        cuts = np.flatnonzero(np.diff(blocks)) + 1
        for b, ps, cs in zip(blocks[np.r_[0, cuts]].tolist(), np.split(primes, cuts),
                             np.split(cof, cuts)):
            self.buckets[b].append((ps, cs))

    def pop(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        parts = self.buckets.pop(i, [])
        if not parts:
            e = np.zeros(0, dtype=np.int64)
            return e, e.copy()
        return (np.concatenate([p for p, _ in parts]), np.concatenate([c for _, c in parts]))

    def check(self, i: int) -> None:
        """Invariant after finishing block ``i``."""
        stale = [b for b in self.buckets if b <= i]
        if stale:
            raise AssertionError(f"buckets {stale} still pending after block {i}")
        seen = np.concatenate([p for parts in self.buckets.values() for p, _ in parts] or
                              [np.zeros(0, dtype=np.int64)])
        if len(np.unique(seen)) != len(seen):
            raise AssertionError("a prime sits in more than one bucket")


def _plain_producer(limit, block_len, first_block, threads, kernels):
    logs = log_table(sieve_bound(limit))
    starts = range(1 + first_block * block_len, limit + 1, block_len)

    def work(s):
        return s, mobius_block(s, min(block_len, limit - s + 1), logs, kernels=kernels)

    yield from _ordered_map(work, starts, threads)


def _bucket_producer(limit, block_len, first_block, bucket_from, kernels, on_block=None):
    k = kernels or _backend.kernels
    logs = log_table(sieve_bound(limit))
    split = logs.upto(max(bucket_from, WHEEL_PRIMES[-1]))
    small = LogTable(logs.primes[:split], logs.entries[:split], logs.bound)
    big = logs.primes[split:]
    big_logs = np.zeros(int(big[-1]) + 1 if len(big) else 1, dtype=np.uint8)
    big_logs[big] = logs.entries[split:]
    sched = BucketSchedule(block_len, limit)
    # a prime joins the blocks from the one holding p*p onwards
    act = np.where(big < ALWAYS_SIEVE_BELOW, 1, big * big)
    act_start = (act - 1) // block_len * block_len + 1
    first_start = first_block * block_len + 1
    from_n = np.maximum(act_start, first_start)
    sched.push(big, -(-from_n // big))

    for i, start in enumerate(range(first_start, limit + 1, block_len), first_block):
        length = min(block_len, limit - start + 1)
        blk = raw_block(start, length)
        end = blk.end
        need = sieve_bound(end)
        # small primes: the ordinary kernel, capped at this block's bound
        n_small = min(small.upto(need), len(small.primes))
        sub = LogTable(small.primes[:n_small], small.entries[:n_small], need,
                       tuple(a[:n_small] for a in small.magic))
        sieve_block(blk, sub, kernels=k)
        ps, cs = sched.pop(i)
        if len(ps):
            k.sieve_bucket(blk.values, start, ps, cs, big_logs[ps])
            k.normalize(blk.values)
            sched.push(ps, cs)
        if on_block is not None:
            on_block(i, sched)
        yield start, classify_block(blk, kernels=k).values


def _scan(limit, stride, block_len, *, events, checkpoint, resume, halt_after, threads,
          kernels, bucketed, bucket_from, on_block=None):
    _check_scan_args(limit, stride, block_len)
    k = kernels or _backend.kernels
    threads = threads or default_threads()
    chash = config_hash("mertens_scan", limit, block_len, stride, bucketed)
    stats = MertensStats(limit, stride)
    first_block = 0
    ev_fh = None
    if resume:
        if checkpoint is None or events is None:
            raise PreconditionError("resume needs both a checkpoint and an events file")
        ck = read_checkpoint(checkpoint)
        if (ck.config_hash != chash or ck.limit != limit or ck.block_len != block_len
                or ck.stride != stride):
            raise CheckpointError("checkpoint was written with a different configuration")
        for kind, n, M in read_events(events, ck.events_offset):
            if kind == "zero":
                stats.zeros.append(n)
            elif kind == "extremum":
                stats.extrema.append((n, M))
            else:
                stats.samples.append((n, M))
        if (len(stats.zeros), len(stats.extrema), len(stats.samples)) != (
                ck.n_zeros, ck.n_extrema, ck.n_samples):
            raise CheckpointError("events file does not match checkpoint counts")
        stats.n_last, stats.M_last, stats.max, stats.min = ck.n_last, ck.M_last, ck.max, ck.min
        first_block = ck.last_block + 1
        ev_fh = open(events, "r+b")
        ev_fh.truncate(ck.events_offset)
        ev_fh.seek(ck.events_offset)
    elif events is not None:
        ev_fh = open(events, "wb")

    if bucketed:
        producer = _bucket_producer(limit, block_len, first_block,
                                    block_len if bucket_from is None else bucket_from, k,
                                    on_block)
    else:
        producer = _plain_producer(limit, block_len, first_block, threads, k)

    M, mx, mn = stats.M_last, stats.max, stats.min
    done = 0
    try:
        for bi, (start, mu) in enumerate(producer, first_block):
            nz, ne, ns = len(stats.zeros), len(stats.extrema), len(stats.samples)
            for c in range(0, len(mu), _CHUNK):
                M, mx, mn = k.accumulate(mu[c:c + _CHUNK], start + c, M, mx, mn, stride,
                                         stats.zeros, stats.extrema, stats.samples)
            if abs(M) >= 1 << 62:
                raise OverflowError("Mertens accumulator overflow")
            stats.n_last, stats.M_last, stats.max, stats.min = start + len(mu) - 1, M, mx, mn
            if ev_fh is not None:
                ev_fh.write(format_events(stats.zeros[nz:], stats.extrema[ne:],
                                          stats.samples[ns:]).encode())
                ev_fh.flush()
            if checkpoint is not None:
                write_checkpoint(checkpoint, Checkpoint(
                    limit, block_len, stride, chash, bi, stats.n_last, M, mx, mn,
                    len(stats.zeros), len(stats.extrema), len(stats.samples),
                    ev_fh.tell() if ev_fh is not None else 0))
            done += 1
            if halt_after is not None and done >= halt_after:
                break
    finally:
        if ev_fh is not None:
            ev_fh.close()
    return stats


def mertens_scan(limit: int, stride: int = DEFAULT_STRIDE, block_len: int = DEFAULT_BLOCK_LEN,
                 *, events=None, checkpoint=None, resume: bool = False,
                 halt_after: int | None = None, threads: int | None = None,
                 kernels=None) -> MertensStats:
    """Scan ``M(n)`` for ``1 <= n <= limit`` and record extrema, zeros and samples.

    Blocks are sieved by a thread pool and reduced in order.  With
    ``events``/``checkpoint`` paths the run can be stopped (``halt_after``
    blocks) and resumed later with ``resume=True``.
    """
    return _scan(limit, stride, block_len, events=events, checkpoint=checkpoint, resume=resume,
                 halt_after=halt_after, threads=threads, kernels=kernels, bucketed=False,
                 bucket_from=None)


def bucket_scan(limit: int, stride: int = DEFAULT_STRIDE, block_len: int = DEFAULT_BLOCK_LEN,
                *, bucket_from: int | None = None, events=None, checkpoint=None,
                resume: bool = False, halt_after: int | None = None, kernels=None,
                on_block=None) -> MertensStats:
    """Same result as :func:`mertens_scan`, with large primes kept in per-block buckets.

    Primes above ``bucket_from`` (default ``block_len``) are only visited in
    blocks that contain one of their multiples.  ``on_block(i, schedule)`` is
    called after each block is sieved.
    """
    return _scan(limit, stride, block_len, events=events, checkpoint=checkpoint, resume=resume,
                 halt_after=halt_after, threads=1, kernels=kernels, bucketed=True,
                 bucket_from=bucket_from, on_block=on_block)


def theorem1_margin(primes) -> int:
    """``sum(floor(log2 p) | 1) - floor(log2 prod p)`` for distinct primes."""
    ps = [int(p) for p in primes]
    if len(set(ps)) != len(ps):
        raise PreconditionError("primes must be distinct")
    n = 1
    for p in ps:
        n *= p
    return sum((p.bit_length() - 1) | 1 for p in ps) - (n.bit_length() - 1)
