"""EM-trained bilingual lexicon and word alignment.

The lexicon is a classic Model 1 translation table t(target | source) with
a NULL source token, trained by expectation maximization on a parallel
corpus. Live queries are very short, so they are never aligned alone:
``mix_with_baseline`` appends the query pair to a baseline corpus and
``extend_lexicon`` folds its vocabulary into an already trained model with
an incremental EM pass.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError, EmptyCorpus, EmptyQuery
from .textcore import tokenize

__all__ = [
    "NULL",
    "ParallelCorpus",
    "LexiconModel",
    "load_parallel_corpus",
    "mix_with_baseline",
    "train_lexicon",
    "extend_lexicon",
    "log_likelihood",
    "align",
]

# Source-side null token: target words may align to nothing.
NULL = None

SentencePair = tuple[list[str], list[str]]
AlignmentLink = tuple[int | None, int]


@dataclass
class ParallelCorpus:
    """Ordered sentence pairs; both sides of every pair are non-empty."""

    pairs: list[SentencePair] = field(default_factory=list)

    def __post_init__(self):
        for k, (src, tgt) in enumerate(self.pairs):
            if not src or not tgt:
                raise ValueError(f"pair {k} has an empty side")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass
class LexiconModel:
    """Translation table t[source][target] plus the observed vocabularies.

    Every t[source] sums to 1 over the target tokens seen co-occurring with
    that source token (NULL co-occurs with everything).
    """

    t: dict[str | None, dict[str, float]]
    source_vocab: set[str]
    target_vocab: set[str]

    def prob(self, target: str, source: str | None) -> float:
        return self.t.get(source, {}).get(target, 0.0)


def load_parallel_corpus(src_path: str | Path, tgt_path: str | Path) -> ParallelCorpus:
    """Load a sentence-aligned corpus from two one-sentence-per-line files.

    Line i of each UTF-8 file forms pair i. Files of unequal length are
    rejected; pairs where either side tokenizes to nothing are dropped.
    """
    src_lines = Path(src_path).read_text(encoding="utf-8").splitlines()
    tgt_lines = Path(tgt_path).read_text(encoding="utf-8").splitlines()
    if len(src_lines) != len(tgt_lines):
        raise CorpusFormatError(
            f"{src_path} has {len(src_lines)} lines but {tgt_path} has {len(tgt_lines)}"
        )
    pairs = []
    for src_line, tgt_line in zip(src_lines, tgt_lines):
        src, tgt = tokenize(src_line), tokenize(tgt_line)
        if src and tgt:
            pairs.append((src, tgt))
    return ParallelCorpus(pairs)


def mix_with_baseline(query: SentencePair, baseline: ParallelCorpus) -> ParallelCorpus:
    """Baseline pairs in original order, then the query pair last.

    No deduplication: a query already present in the baseline appears twice.
    """
    src, tgt = query
    if not src or not tgt:
        raise EmptyQuery("query source and target must be non-empty")
    return ParallelCorpus(list(baseline.pairs) + [(src, tgt)])


def _cooccurrences(corpus: ParallelCorpus) -> dict[str | None, set[str]]:
    cooc: dict[str | None, set[str]] = defaultdict(set)
    for src, tgt in corpus:
        for tt in tgt:
            cooc[NULL].add(tt)
            for s in src:
                cooc[s].add(tt)
    return cooc


def _em_iteration(
    t: dict[str | None, dict[str, float]], corpus: ParallelCorpus
) -> dict[str | None, dict[str, float]]:
    """One EM pass: expected counts under t, then per-source renormalization."""
    count: dict[str | None, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    total: dict[str | None, float] = defaultdict(float)
    for src, tgt in corpus:
        sources = [NULL] + src
        for tt in tgt:
            denom = 0.0
            for s in sources:
                denom += t.get(s, {}).get(tt, 0.0)
            if denom == 0.0:
                continue
            for s in sources:
                p = t.get(s, {}).get(tt, 0.0)
                if p:
                    c = p / denom
                    count[s][tt] += c
                    total[s] += c
    return {
        s: {tt: c / total[s] for tt, c in counts.items()}
        for s, counts in count.items()
    }


def _apply_null_floor(
    t: dict[str | None, dict[str, float]], floor: float, target_vocab: set[str]
) -> None:
    """Keep NULL available: every t(target|NULL) ends up >= floor, sum 1.

    Water-filling: entries below the floor are pinned to it and the rest of
    the distribution is rescaled into the remaining mass, repeating until
    nothing sits below the floor.
    """
    if floor <= 0.0:
        return
    if floor * len(target_vocab) > 1.0:
        raise ValueError("null_prob_floor too large for the target vocabulary")
    dist = t.setdefault(NULL, {})
    for tt in target_vocab:
        dist.setdefault(tt, 0.0)
    pinned: set[str] = set()
    while True:
        below = [tt for tt in dist if tt not in pinned and dist[tt] < floor]
        if not below:
            break
        pinned.update(below)
        free = [tt for tt in dist if tt not in pinned]
        if not free:
            break
        free_mass = 1.0 - floor * len(pinned)
        free_total = sum(dist[tt] for tt in free)
        for tt in below:
            dist[tt] = floor
        for tt in free:
            dist[tt] = dist[tt] / free_total * free_mass


def train_lexicon(
    corpus: ParallelCorpus, iterations: int, null_prob_floor: float = 0.0
) -> LexiconModel:
    """Train the translation table with Model 1 EM.

    Initialization is uniform over co-occurring (source, target) pairs, with
    NULL paired with every target token. Each iteration accumulates expected
    counts by normalizing per target token over the sentence's source tokens
    plus NULL, then renormalizes each source's distribution. After every
    M step ``null_prob_floor`` is enforced on the NULL distribution.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")

    cooc = _cooccurrences(corpus)
    t = {s: {tt: 1.0 / len(tts) for tt in tts} for s, tts in cooc.items()}
    target_vocab = set(cooc[NULL])
    _apply_null_floor(t, null_prob_floor, target_vocab)
    for _ in range(iterations):
        t = _em_iteration(t, corpus)
        _apply_null_floor(t, null_prob_floor, target_vocab)

    source_vocab = {s for s in cooc if s is not NULL}
    return LexiconModel(t=t, source_vocab=source_vocab, target_vocab=target_vocab)


def extend_lexicon(
    model: LexiconModel,
    corpus: ParallelCorpus,
    iterations: int = 1,
    null_prob_floor: float = 0.0,
    seed_prob: float = 0.01,
) -> LexiconModel:
    """Fold new vocabulary into a trained model with incremental EM passes.

    Brand-new source tokens start uniform over their co-occurring targets.
    Under an already known source (or NULL), an unseen target is seeded with
    only ``seed_prob`` mass (existing entries scaled down accordingly), so a
    single co-occurrence cannot instantly outweigh attested translations;
    the EM passes over ``corpus`` then decide how much it earns. Returns a
    new model; the input is not mutated.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot update on an empty corpus")

    t = {s: dict(dist) for s, dist in model.t.items()}
    cooc = _cooccurrences(corpus)
    for s, targets in cooc.items():
        dist = t.get(s)
        if dist is None:
            t[s] = {tt: 1.0 / len(targets) for tt in targets}
            continue
        new = [tt for tt in targets if tt not in dist]
        if not new:
            continue
        share = min(seed_prob, 1.0 / (len(dist) + len(new)))
        scale = 1.0 - share * len(new)
        for tt in dist:
            dist[tt] *= scale
        for tt in new:
            dist[tt] = share

    target_vocab = model.target_vocab | cooc[NULL]
    for _ in range(iterations):
        t = _em_iteration(t, corpus)
        _apply_null_floor(t, null_prob_floor, target_vocab)

    source_vocab = model.source_vocab | {s for s in cooc if s is not NULL}
    return LexiconModel(t=t, source_vocab=source_vocab, target_vocab=target_vocab)


def log_likelihood(model: LexiconModel, corpus: ParallelCorpus) -> float:
    """Model 1 corpus log-likelihood (uniform alignment prior included)."""
    ll = 0.0
    for src, tgt in corpus:
        sources = [NULL] + src
        prior = 1.0 / len(sources)
        for tt in tgt:
            p = prior * sum(model.prob(tt, s) for s in sources)
            ll += math.log(p) if p > 0.0 else float("-inf")
    return ll


def align(
    model: LexiconModel, source: list[str], target: list[str]
) -> list[AlignmentLink]:
    """Link every target index to its most probable source index, or NULL.

    Target token j links to argmax_i t(target_j | source_i), ties broken by
    the smallest source index. It links to NULL (src index ``None``) when it
    is out of vocabulary or when t(target_j | NULL) strictly exceeds every
    per-source probability.
    """
    if not source or not target:
        raise ValueError("source and target must be non-empty")
    links: list[AlignmentLink] = []
    for j, tt in enumerate(target):
        if tt not in model.target_vocab:
            links.append((NULL, j))
            continue
        best_i, best_p = 0, -1.0
        for i, s in enumerate(source):
            p = model.prob(tt, s)
            if p > best_p:
                best_i, best_p = i, p
        if model.prob(tt, NULL) > best_p:
            links.append((NULL, j))
        else:
            links.append((best_i, j))
    return links
