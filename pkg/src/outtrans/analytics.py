"""Session log analytics: segments, edit taxonomy, similarity and ratings.

A segment is the slice of a session devoted to one stimulus, from its NEXT
event up to the next NEXT. Reports aggregate per domain (domains come from
a stimulus table keyed by sid) and always include an "All" row.
"""

from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats as scipy_stats

from .errors import LengthMismatch
from .eventlog import EventRecord, Session
from .qe import BAD, OK
from .textcore import gestalt_similarity, tokenize

__all__ = [
    "Segment",
    "SegmentClass",
    "RatingRecord",
    "ConfusionMatrix",
    "TTestResult",
    "segment_events",
    "classify_segment",
    "first_viable",
    "segment_report",
    "duration_report",
    "similarity_report",
    "rating_report",
    "paired_t_test",
    "confusion_matrix",
    "pair_ratings",
    "load_stimuli",
    "load_ratings",
    "label_segments",
]

CONFIRMED = "confirmed"
SKIPPED = "skipped"
ABANDONED = "abandoned"

ALL_DOMAINS = "All"

# sentence-final marks that qualify a snapshot as a complete attempt
_TERMINAL_PUNCT = {".", "!", "?", "…"}

LENGTH_BUCKETS = [
    (1, 5, "1-5"),
    (6, 10, "6-10"),
    (11, 15, "11-15"),
    (16, 20, "16-20"),
    (21, 25, "21-25"),
    (26, None, ">25"),
]


def _norm_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass
class Segment:
    """One stimulus's event subsequence with its extracted text snapshots."""

    sid: str
    events: list[EventRecord]
    input_snapshots: list[str] = field(default_factory=list)
    translation_snapshots: list[str] = field(default_factory=list)
    outcome: str = ABANDONED


@dataclass
class SegmentClass:
    skipped: bool = False
    finished: bool = False
    linear: bool = False
    with_edits: bool = False
    init_copy: bool = False
    copy_submit: bool = False


@dataclass
class RatingRecord:
    sid: str
    domain: str
    variant: str  # "first_viable" or "final"
    rating: int
    source_length: int

    def __post_init__(self):
        if self.rating not in (1, 2, 3, 4, 5):
            raise ValueError(f"rating must be 1..5, got {self.rating}")
        if self.variant not in ("first_viable", "final"):
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass
class ConfusionMatrix:
    """Tag-agreement cells as percentages of all compared tags."""

    tp: float
    fp: float
    fn: float
    tn: float


@dataclass
class TTestResult:
    t: float
    dof: int
    p_two_sided: float
    zero_variance: bool = False


def segment_events(session: Session) -> tuple[list[Segment], list[str]]:
    """Split a session into per-stimulus segments at each NEXT event.

    Events before the first NEXT belong to no segment; a CONFIRM or SKIP
    there is reported as a diagnostic. The outcome is confirmed when the
    segment contains a CONFIRM, skipped on SKIP, otherwise abandoned.
    """
    segments: list[Segment] = []
    diagnostics: list[str] = []
    current: Segment | None = None
    for record in session.events:
        if record.code == "NEXT":
            current = Segment(sid=record.payload["sid"], events=[record])
            segments.append(current)
            continue
        if current is None:
            if record.code in ("CONFIRM", "SKIP"):
                diagnostics.append(
                    f"session {session.session_id}: dangling {record.code} "
                    f"before any NEXT"
                )
            continue
        current.events.append(record)
        if record.code == "TRANSLATE1":
            current.input_snapshots.append(record.payload["txt1"])
            current.translation_snapshots.append(record.payload["txt2"])
        elif record.code == "CONFIRM":
            if current.outcome == ABANDONED:
                current.outcome = CONFIRMED
            txt1, txt2 = record.payload["txt1"], record.payload["txt2"]
            last = (
                (current.input_snapshots[-1], current.translation_snapshots[-1])
                if current.input_snapshots
                else None
            )
            if last != (txt1, txt2):
                current.input_snapshots.append(txt1)
                current.translation_snapshots.append(txt2)
        elif record.code == "SKIP" and current.outcome == ABANDONED:
            current.outcome = SKIPPED
    return segments, diagnostics


def _is_prefix_chain(snapshots: list[str]) -> bool:
    for earlier, later in zip(snapshots, snapshots[1:]):
        if not later.rstrip().startswith(earlier.rstrip()):
            return False
    return True


def classify_segment(segment: Segment, stimulus_text: str) -> SegmentClass:
    """Edit-taxonomy flags for a finished or skipped segment.

    Linear means every input snapshot is a character-level prefix of its
    successor (trailing whitespace ignored); init_copy and copy_submit
    compare the first non-empty and the confirmed final snapshot against
    the stimulus text after whitespace normalization.
    """
    if segment.outcome == ABANDONED:
        raise ValueError("abandoned segments are not classified")
    cls = SegmentClass()
    cls.skipped = segment.outcome == SKIPPED
    cls.finished = segment.outcome == CONFIRMED
    if cls.finished:
        cls.linear = _is_prefix_chain(segment.input_snapshots)
        cls.with_edits = not cls.linear
    stimulus = _norm_ws(stimulus_text)
    first_nonempty = next((s for s in segment.input_snapshots if s.strip()), None)
    if first_nonempty is not None and _norm_ws(first_nonempty) == stimulus:
        cls.init_copy = True
    if (
        cls.finished
        and segment.input_snapshots
        and _norm_ws(segment.input_snapshots[-1]) == stimulus
    ):
        cls.copy_submit = True
    return cls


def first_viable(segment: Segment) -> tuple[str, str] | None:
    """The longest nonfinal input snapshot that ends in terminal punctuation.

    Only meaningful for finished segments (reports restrict further to
    segments with edits). Returns the snapshot and its parallel
    translation; ties in length go to the earlier snapshot; None when no
    nonfinal snapshot qualifies.
    """
    if segment.outcome != CONFIRMED:
        raise ValueError("first_viable requires a finished segment")
    best_idx, best_len = None, -1
    for idx, snapshot in enumerate(segment.input_snapshots[:-1]):
        stripped = snapshot.rstrip()
        if not stripped or stripped[-1] not in _TERMINAL_PUNCT:
            continue
        if len(snapshot) > best_len:
            best_idx, best_len = idx, len(snapshot)
    if best_idx is None:
        return None
    return (
        segment.input_snapshots[best_idx],
        segment.translation_snapshots[best_idx],
    )


# --- domain labelling -------------------------------------------------------


@dataclass
class Stimulus:
    sid: str
    domain: str
    text: str


def load_stimuli(path: str | Path) -> dict[str, Stimulus]:
    """Read the sid/domain/text table (TSV, header optional)."""
    stimuli: dict[str, Stimulus] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f, delimiter="\t")
        for row_no, row in enumerate(reader):
            if not row or not any(cell.strip() for cell in row):
                continue
            if row_no == 0 and [c.strip().lower() for c in row[:2]] == ["sid", "domain"]:
                continue
            if len(row) < 3:
                raise ValueError(f"{path}: row {row_no + 1} needs sid, domain, text")
            sid, domain, text = row[0], row[1], row[2]
            stimuli[sid] = Stimulus(sid=sid, domain=domain, text=text)
    return stimuli


def label_segments(
    sessions: list[Session], stimuli: dict[str, Stimulus]
) -> list[tuple[Segment, str, str]]:
    """(segment, domain, stimulus text) for every segment in the sessions.

    Segments whose sid has no stimulus entry get domain "unknown" and an
    empty stimulus text.
    """
    labelled = []
    for session in sessions:
        segments, _ = segment_events(session)
        for segment in segments:
            stimulus = stimuli.get(segment.sid)
            if stimulus is None:
                labelled.append((segment, "unknown", ""))
            else:
                labelled.append((segment, stimulus.domain, stimulus.text))
    return labelled


# --- reports ----------------------------------------------------------------


@dataclass
class SegmentCounts:
    segments: int = 0
    skipped: int = 0
    finished: int = 0
    abandoned: int = 0
    linear: int = 0
    with_edits: int = 0
    init_copy: int = 0
    copy_submit: int = 0


def segment_report(
    labelled: list[tuple[Segment, str, str]]
) -> dict[str, SegmentCounts]:
    """Per-domain segment taxonomy counts, plus the All row."""
    report: dict[str, SegmentCounts] = defaultdict(SegmentCounts)
    for segment, domain, stimulus_text in labelled:
        for key in (domain, ALL_DOMAINS):
            counts = report[key]
            counts.segments += 1
            if segment.outcome == ABANDONED:
                counts.abandoned += 1
                continue
            cls = classify_segment(segment, stimulus_text)
            counts.skipped += cls.skipped
            counts.finished += cls.finished
            counts.linear += cls.linear
            counts.with_edits += cls.with_edits
            counts.init_copy += cls.init_copy
            counts.copy_submit += cls.copy_submit
    return dict(report)


@dataclass
class DurationRow:
    count: int = 0
    mean_seconds: float | None = None


def duration_report(
    labelled: list[tuple[Segment, str, str]]
) -> dict[str, DurationRow]:
    """Per-domain segment counts and mean durations, abandoned excluded.

    A segment's duration runs from its NEXT event to its last event. Means
    are kept unrounded here; rounding to whole seconds happens at render
    time.
    """
    sums: dict[str, list[float]] = defaultdict(list)
    for segment, domain, _ in labelled:
        if segment.outcome == ABANDONED:
            continue
        duration = segment.events[-1].ts - segment.events[0].ts
        sums[domain].append(duration)
        sums[ALL_DOMAINS].append(duration)
    return {
        domain: DurationRow(count=len(values), mean_seconds=float(np.mean(values)))
        for domain, values in sums.items()
    }


@dataclass
class SimilarityRow:
    count: int = 0
    input_similarity: float | None = None
    translation_similarity: float | None = None
    without_first_viable: int = 0


def similarity_report(
    labelled: list[tuple[Segment, str, str]]
) -> dict[str, SimilarityRow]:
    """Mean word-level similarity between first-viable and final versions.

    Only finished segments with edits participate; segments without a
    first-viable snapshot are excluded from the averages and counted in
    ``without_first_viable``.
    """
    input_sims: dict[str, list[float]] = defaultdict(list)
    translation_sims: dict[str, list[float]] = defaultdict(list)
    missing: Counter[str] = Counter()
    for segment, domain, _ in labelled:
        if segment.outcome != CONFIRMED or _is_prefix_chain(segment.input_snapshots):
            continue
        viable = first_viable(segment)
        if viable is None:
            missing[domain] += 1
            missing[ALL_DOMAINS] += 1
            continue
        viable_input, viable_translation = viable
        input_sim = gestalt_similarity(
            tokenize(viable_input), tokenize(segment.input_snapshots[-1])
        )
        translation_sim = gestalt_similarity(
            tokenize(viable_translation), tokenize(segment.translation_snapshots[-1])
        )
        for key in (domain, ALL_DOMAINS):
            input_sims[key].append(input_sim)
            translation_sims[key].append(translation_sim)
    report = {}
    for domain in set(input_sims) | set(missing):
        values = input_sims.get(domain, [])
        report[domain] = SimilarityRow(
            count=len(values),
            input_similarity=float(np.mean(values)) if values else None,
            translation_similarity=(
                float(np.mean(translation_sims[domain])) if values else None
            ),
            without_first_viable=missing.get(domain, 0),
        )
    return report


def load_ratings(path: str | Path) -> list[RatingRecord]:
    """Read the ratings CSV (header: sid, domain, variant, rating, source_length)."""
    records = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            records.append(
                RatingRecord(
                    sid=row["sid"],
                    domain=row["domain"],
                    variant=row["variant"],
                    rating=int(row["rating"]),
                    source_length=int(row["source_length"]),
                )
            )
    return records


@dataclass
class RatingStats:
    count: int
    mean: float
    variance: float  # population variance (divide by n)


@dataclass
class RatingReport:
    means: dict[tuple[str, str], RatingStats]  # (domain, variant) -> stats
    histogram: dict[str, dict[int, int]]  # variant -> rating -> count
    by_length: dict[tuple[str, str], RatingStats]  # (bucket, variant) -> stats


def _length_bucket(length: int) -> str:
    for low, high, label in LENGTH_BUCKETS:
        if high is None or length <= high:
            return label
    return LENGTH_BUCKETS[-1][2]


def _stats(values: list[int]) -> RatingStats:
    arr = np.asarray(values, dtype=float)
    return RatingStats(
        count=len(values), mean=float(arr.mean()), variance=float(arr.var())
    )


def rating_report(ratings: list[RatingRecord]) -> RatingReport:
    """Table-style rating aggregates: means/variances, histogram, length buckets."""
    by_domain: dict[tuple[str, str], list[int]] = defaultdict(list)
    histogram: dict[str, dict[int, int]] = defaultdict(lambda: {r: 0 for r in range(1, 6)})
    by_bucket: dict[tuple[str, str], list[int]] = defaultdict(list)
    for record in ratings:
        by_domain[(record.domain, record.variant)].append(record.rating)
        by_domain[(ALL_DOMAINS, record.variant)].append(record.rating)
        histogram[record.variant][record.rating] += 1
        bucket = _length_bucket(record.source_length)
        by_bucket[(bucket, record.variant)].append(record.rating)
    return RatingReport(
        means={key: _stats(vals) for key, vals in by_domain.items()},
        histogram=dict(histogram),
        by_length={key: _stats(vals) for key, vals in by_bucket.items()},
    )


def pair_ratings(
    ratings: list[RatingRecord],
) -> tuple[list[float], list[float]]:
    """Pair first-viable and final ratings by sid (sids with both variants)."""
    by_sid: dict[str, dict[str, int]] = defaultdict(dict)
    for record in ratings:
        by_sid[record.sid][record.variant] = record.rating
    first, final = [], []
    for sid in sorted(by_sid):
        variants = by_sid[sid]
        if "first_viable" in variants and "final" in variants:
            first.append(float(variants["first_viable"]))
            final.append(float(variants["final"]))
    return first, final


def paired_t_test(x: list[float], y: list[float]) -> TTestResult:
    """Two-sided paired t-test on per-item differences x - y.

    Uses the sample standard deviation (n-1) of the differences; when every
    difference is identical the statistic is degenerate: zero mean gives
    t=0, p=1, a nonzero mean is reported as t=+-inf, p=0 with the
    zero_variance flag set.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)} observations")
    n = len(x)
    if n < 2:
        raise ValueError("need at least two paired observations")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    dof = n - 1
    if sd == 0.0:
        if mean == 0.0:
            return TTestResult(t=0.0, dof=dof, p_two_sided=1.0)
        return TTestResult(
            t=math.copysign(math.inf, mean),
            dof=dof,
            p_two_sided=0.0,
            zero_variance=True,
        )
    t = mean / (sd / math.sqrt(n))
    p = 2.0 * float(scipy_stats.t.sf(abs(t), dof))
    return TTestResult(t=t, dof=dof, p_two_sided=p)


def confusion_matrix(
    gold: list[list[str]], hyp: list[list[str]]
) -> ConfusionMatrix:
    """Tag agreement between two annotations, OK as the positive class.

    Cells are percentages of all compared tags: TP both OK, FN gold OK but
    hyp BAD, FP gold BAD but hyp OK, TN both BAD.
    """
    if len(gold) != len(hyp):
        raise LengthMismatch(f"{len(gold)} vs {len(hyp)} sentences")
    tp = fp = fn = tn = 0
    for i, (gold_tags, hyp_tags) in enumerate(zip(gold, hyp)):
        if len(gold_tags) != len(hyp_tags):
            raise LengthMismatch(
                f"sentence {i}: {len(gold_tags)} vs {len(hyp_tags)} tags"
            )
        for g, h in zip(gold_tags, hyp_tags):
            if g == OK and h == OK:
                tp += 1
            elif g == OK and h == BAD:
                fn += 1
            elif g == BAD and h == OK:
                fp += 1
            else:
                tn += 1
    total = tp + fp + fn + tn
    if total == 0:
        raise ValueError("no tags to compare")
    return ConfusionMatrix(
        tp=100.0 * tp / total,
        fp=100.0 * fp / total,
        fn=100.0 * fn / total,
        tn=100.0 * tn / total,
    )
