"""Frequency and showdown rankings, breakpoints, and stability certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .closed_form import MIN_VALID_R, closed_counts, freq_poly
from .enumerator import enumerate_inclusive, enumerate_showdown
from .exact import Polynomial, SignCertificate, binom_poly, certify_sign_permanence
from .hands import CLASSES, HandClass, Ranking, check_ranks

H = HandClass
NON_HC = tuple(h for h in CLASSES if h is not H.HC)
CLOSED_FROM = max(MIN_VALID_R.values())


def frequency_counts(r: int, **sweep_opts) -> Dict[HandClass, int]:
    """Inclusive counts from closed forms when all are valid, else by enumeration."""
    check_ranks(r)
    if r >= CLOSED_FROM:
        return closed_counts(r)
    return enumerate_inclusive(r, **sweep_opts).counts


def frequency_ranking(r: int, **sweep_opts) -> Ranking:
    return Ranking.from_counts(frequency_counts(r, **sweep_opts))


def agree(a: Ranking, b: Ranking, include_hc: bool = True) -> bool:
    keep = CLASSES if include_hc else NON_HC
    return a.restrict(keep) == b.restrict(keep)


def discrepancies(
    a: Ranking, b: Ranking, include_hc: bool = True
) -> List[Tuple[HandClass, HandClass]]:
    """Class pairs whose relative order (above, below or tied) differs between two rankings."""
    keep = CLASSES if include_hc else NON_HC
    out = []
    for i, x in enumerate(keep):
        for y in keep[i + 1 :]:
            ca = (a.level_of(x) > a.level_of(y)) - (a.level_of(x) < a.level_of(y))
            cb = (b.level_of(x) > b.level_of(y)) - (b.level_of(x) < b.level_of(y))
            if ca != cb:
                out.append((x, y))
    return out


@dataclass(frozen=True)
class Segment:
    r_low: int
    r_high: int
    ranking: Ranking


@dataclass(frozen=True)
class BreakpointReport:
    segments: Tuple[Segment, ...]

    @property
    def starts(self) -> List[int]:
        return [s.r_low for s in self.segments]


def scan_breakpoints(r_min: int, r_max: int, **sweep_opts) -> BreakpointReport:
    check_ranks(r_min)
    if r_max < r_min:
        raise ValueError(f"empty scan range {r_min}..{r_max}")
    segments: List[Segment] = []
    for r in range(r_min, r_max + 1):
        rk = frequency_ranking(r, **sweep_opts)
        if segments and segments[-1].ranking == rk:
            last = segments[-1]
            segments[-1] = Segment(last.r_low, r, rk)
        else:
            segments.append(Segment(r, r, rk))
    return BreakpointReport(tuple(segments))


@dataclass(frozen=True)
class PairCertificate:
    lower: HandClass  # the more frequent class, ranked below ``upper``
    upper: HandClass
    certificate: SignCertificate

    @property
    def certified(self) -> bool:
        return self.certificate.certified and self.certificate.sign > 0


@dataclass(frozen=True)
class StabilityReport:
    from_r: int
    ranking: Ranking
    pairs: Tuple[PairCertificate, ...]
    hc_checks: Tuple[PairCertificate, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return all(p.certified for p in self.pairs + self.hc_checks)

    @property
    def failure(self) -> Optional[PairCertificate]:
        for p in self.hc_checks + self.pairs:
            if not p.certified:
                return p
        return None

    def __bool__(self) -> bool:
        return self.certified


def _count_poly(h: HandClass) -> Polynomial:
    if h is H.HC:
        return binom_poly(4, 0, 7)
    return freq_poly(h).polynomial


def certify_stability(
    from_r: int, pairs: Optional[Sequence[Tuple[HandClass, HandClass]]] = None
) -> StabilityReport:
    """Certify that the frequency ranking at ``from_r`` never changes afterwards.

    Every adjacent pair of non-HC classes (or only ``pairs``, if given) must
    have a difference polynomial of permanent sign from ``from_r`` on. HC is
    checked separately to stay strictly the most frequent class.
    """
    check_ranks(from_r)
    if from_r < CLOSED_FROM:
        raise ValueError(f"stability can only be certified from r >= {CLOSED_FROM}")
    ranking = frequency_ranking(from_r)
    counts = closed_counts(from_r)

    if pairs is None:
        if any(len(lv) > 1 for lv in ranking.restrict(NON_HC)):
            raise ValueError(f"frequency ranking at r={from_r} has ties: {ranking}")
        chain = [lv[0] for lv in ranking.restrict(NON_HC)]
        pairs = list(zip(chain, chain[1:]))
        hc_pairs = [(H.HC, h) for h in NON_HC]
    else:
        hc_pairs = []

    def certify(a: HandClass, b: HandClass) -> PairCertificate:
        lower, upper = (a, b) if counts[a] >= counts[b] else (b, a)
        cert = certify_sign_permanence(_count_poly(lower) - _count_poly(upper), from_r)
        return PairCertificate(lower, upper, cert)

    return StabilityReport(
        from_r,
        ranking,
        tuple(certify(a, b) for a, b in pairs),
        tuple(certify(a, b) for a, b in hc_pairs),
    )


def showdown_ranking(r: int, base: Ranking, **sweep_opts) -> Ranking:
    return Ranking.from_counts(enumerate_showdown(r, base, **sweep_opts).counts)


class NoConvergenceError(RuntimeError):
    def __init__(self, r: int, trajectory: Sequence[Ranking]):
        super().__init__(
            f"showdown iteration at r={r} found no fixpoint or cycle in {len(trajectory) - 1} steps"
        )
        self.r = r
        self.trajectory = tuple(trajectory)


@dataclass(frozen=True)
class IterationResult:
    """``kind`` is ``"fixpoint"`` or ``"cycle"``; ``rankings`` lists the attractor.

    A cycle longer than 2 is reported as a cycle with more rankings; only
    fixpoints and 2-cycles are expected.
    """

    r: int
    kind: str
    rankings: Tuple[Ranking, ...]
    trajectory: Tuple[Ranking, ...]

    @property
    def period(self) -> int:
        return len(self.rankings)


def iterate_showdown(r: int, base: Ranking, max_iter: int = 32, **sweep_opts) -> IterationResult:
    if max_iter < 2:
        raise ValueError("max_iter must be at least 2")
    traj = [base]
    for _ in range(max_iter):
        nxt = showdown_ranking(r, traj[-1], **sweep_opts)
        if nxt == traj[-1]:
            traj.append(nxt)
            return IterationResult(r, "fixpoint", (nxt,), tuple(traj))
        if nxt in traj:
            start = traj.index(nxt)
            cycle = tuple(traj[start:])
            traj.append(nxt)
            return IterationResult(r, "cycle", cycle, tuple(traj))
        traj.append(nxt)
    raise NoConvergenceError(r, traj)


@dataclass(frozen=True)
class AgreementRow:
    r: int
    frequency: Ranking
    showdown: Ranking
    discrepancies: Tuple[Tuple[HandClass, HandClass], ...]

    @property
    def agrees(self) -> bool:
        return not self.discrepancies


def agreement_at(r: int, include_hc: bool, **sweep_opts) -> AgreementRow:
    freq = frequency_ranking(r, **sweep_opts)
    sd = showdown_ranking(r, freq, **sweep_opts)
    return AgreementRow(r, freq, sd, tuple(discrepancies(freq, sd, include_hc)))


def agreement_sweep(
    include_hc: bool, r_max: int, r_min: int = 5, **sweep_opts
) -> Iterable[AgreementRow]:
    for r in range(r_min, r_max + 1):
        yield agreement_at(r, include_hc, **sweep_opts)


def find_min_agreement(include_hc: bool, r_max: int, r_min: int = 5, **sweep_opts) -> Optional[int]:
    """Smallest r in ``[r_min, r_max]`` whose showdown ranking equals its frequency ranking.

    Returns ``None`` when no such r exists in range.
    """
    for row in agreement_sweep(include_hc, r_max, r_min, **sweep_opts):
        if row.agrees:
            return row.r
    return None
