"""Exhaustive sweeps over all C(4r, 7) seven-card hands.

A sweep produces a *profile histogram*: for each of the 512 possible
containment bitsets, the number of hands with exactly that profile.
Inclusive counts, showdown counts under any ranking, and the nothing count
are all read off the histogram, so one sweep per ``r`` serves every query.
"""

from __future__ import annotations

import logging
import math
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _kernels
from .hands import CLASSES, ContainmentProfile, HandClass, Ranking, best_class, check_ranks

log = logging.getLogger(__name__)

DEFAULT_CEILING = 16
# rank masks live in signed 64-bit words inside the kernels
MAX_RANKS = 60
THREADS_ENV = "RANKFORGE_THREADS"
# contiguous colex ranges are cut to about this many hands so progress can be reported
CHUNK_HANDS = 1 << 23


class EnumerationCeilingError(ValueError):
    pass


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def colex_ranges(total: int, parts: int) -> List[Tuple[int, int]]:
    """Split ``[0, total)`` into ``parts`` contiguous near-equal ranges."""
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


class _Progress:
    def __init__(self, label: str, total: int, interval: Optional[float], stream=None):
        self.label = label
        self.total = total
        self.interval = interval
        self.stream = stream or sys.stderr
        self.done = 0
        self.start = self.last = time.monotonic()
        self.lock = threading.Lock()

    def add(self, n: int) -> None:
        if self.interval is None:
            return
        with self.lock:
            self.done += n
            now = time.monotonic()
            if now - self.last >= self.interval:
                self.last = now
                pct = 100.0 * self.done / self.total if self.total else 100.0
                print(
                    f"[{self.label}] {pct:5.1f}% ({self.done:,}/{self.total:,}) "
                    f"{now - self.start:.1f}s",
                    file=self.stream,
                    flush=True,
                )


def _check_ceiling(r: int, ceiling: int, long_run: bool) -> None:
    if r > MAX_RANKS:
        raise EnumerationCeilingError(f"the sweep kernels support at most r={MAX_RANKS}, got {r}")
    if r > ceiling:
        if not long_run:
            raise EnumerationCeilingError(
                f"enumerating r={r} exceeds the ceiling r={ceiling}; pass long_run=True "
                f"(CLI: --long-run) to run it anyway"
            )
        log.warning("long run: enumerating all C(%d, 7) = %s hands", 4 * r, f"{math.comb(4 * r, 7):,}")


def sweep(
    r: int,
    threads: Optional[int] = None,
    suit_canonical: bool = False,
    progress_interval: Optional[float] = None,
    ceiling: int = DEFAULT_CEILING,
    long_run: bool = False,
) -> np.ndarray:
    """Run one uncached sweep and return the 512-slot profile histogram."""
    check_ranks(r)
    _check_ceiling(r, ceiling, long_run)
    nthreads = resolve_threads(threads)
    total = math.comb(4 * r, 7)

    if suit_canonical:
        masks, offsets = _kernels.masks_by_popcount(r)
        tops = np.arange(offsets[1], offsets[8], dtype=np.int64)
        # interleave top masks across workers; the big-popcount tops are cheap
        parts = [tops[i :: max(1, nthreads * 8)] for i in range(max(1, nthreads * 8))]
        parts = [p for p in parts if len(p)]
        prog = _Progress(f"r={r} canonical", len(tops), progress_interval)

        def work(part: np.ndarray) -> np.ndarray:
            hist = np.zeros(_kernels.NPROFILES, dtype=np.int64)
            _kernels.sweep_canonical(r, part, masks, offsets, hist)
            prog.add(len(part))
            return hist

    else:
        nchunks = max(nthreads, -(-total // CHUNK_HANDS))
        parts = colex_ranges(total, nchunks)
        prog = _Progress(f"r={r}", total, progress_interval)

        def work(rng: Tuple[int, int]) -> np.ndarray:
            hist = np.zeros(_kernels.NPROFILES, dtype=np.int64)
            _kernels.sweep_range(r, rng[0], rng[1], hist)
            prog.add(rng[1] - rng[0])
            return hist

    if nthreads == 1:
        partials = [work(p) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            partials = list(pool.map(work, parts))

    out = np.zeros(_kernels.NPROFILES, dtype=np.int64)
    for h in partials:
        out += h
    if int(out.sum()) != total:
        raise RuntimeError(f"sweep for r={r} covered {int(out.sum())} hands, expected {total}")
    return out


_cache: Dict[Tuple[int, bool], np.ndarray] = {}
_cache_lock = threading.Lock()


def profile_histogram(
    r: int,
    threads: Optional[int] = None,
    suit_canonical: bool = False,
    progress_interval: Optional[float] = None,
    ceiling: int = DEFAULT_CEILING,
    long_run: bool = False,
) -> np.ndarray:
    """Memoised :func:`sweep`; results do not depend on the thread count."""
    key = (r, suit_canonical)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is None:
        hit = sweep(r, threads, suit_canonical, progress_interval, ceiling, long_run)
        hit.setflags(write=False)
        with _cache_lock:
            _cache[key] = hit
    return hit


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


@dataclass(frozen=True)
class CountTable:
    r: int
    mode: str  # "inclusive" or "showdown"
    counts: Dict[HandClass, int]
    total: int
    ranking_used: Optional[Ranking] = None
    tied_profiles: int = field(default=0, compare=False)

    def rows(self) -> List[Tuple[HandClass, int]]:
        """Rows in presentation order: declaration order, or ascending count for showdown."""
        if self.mode == "showdown":
            return sorted(self.counts.items(), key=lambda kv: (kv[1], kv[0].index))
        return [(h, self.counts[h]) for h in CLASSES]

    def to_dict(self) -> dict:
        out = {
            "r": self.r,
            "mode": self.mode,
            "total": str(self.total),
            "counts": {h.value: str(c) for h, c in self.rows()},
        }
        if self.ranking_used is not None:
            out["ranking"] = ["=".join(h.value for h in lv) for lv in self.ranking_used.levels]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CountTable":
        ranking = None
        if "ranking" in d:
            ranking = Ranking(tuple(tuple(HandClass(x) for x in lv.split("=")) for lv in d["ranking"]))
        return cls(
            r=int(d["r"]),
            mode=d["mode"],
            counts={HandClass(k): int(v) for k, v in d["counts"].items()},
            total=int(d["total"]),
            ranking_used=ranking,
        )


def inclusive_from_histogram(hist: np.ndarray) -> Dict[HandClass, int]:
    counts = {h: 0 for h in CLASSES}
    for bits in np.flatnonzero(hist):
        n = int(hist[bits])
        for h in CLASSES:
            if bits >> h.index & 1:
                counts[h] += n
    return counts


def showdown_from_histogram(hist: np.ndarray, ranking: Ranking) -> Tuple[Dict[HandClass, int], int]:
    """Showdown counts and the number of hands whose declaration needed a tie-break."""
    counts = {h: 0 for h in CLASSES}
    tied = 0
    for bits in np.flatnonzero(hist):
        n = int(hist[bits])
        h, tie = best_class(ContainmentProfile.from_bits(int(bits)), ranking)
        counts[h] += n
        if tie:
            tied += n
    return counts, tied


def enumerate_inclusive(r: int, **sweep_opts) -> CountTable:
    hist = profile_histogram(r, **sweep_opts)
    return CountTable(r, "inclusive", inclusive_from_histogram(hist), math.comb(4 * r, 7))


def enumerate_showdown(r: int, ranking: Ranking, **sweep_opts) -> CountTable:
    hist = profile_histogram(r, **sweep_opts)
    counts, tied = showdown_from_histogram(hist, ranking)
    return CountTable(r, "showdown", counts, math.comb(4 * r, 7), ranking, tied)


def nothing_count(r: int, **sweep_opts) -> int:
    """Hands containing no class besides HC."""
    hist = profile_histogram(r, **sweep_opts)
    return int(hist[1 << HandClass.HC.index])

