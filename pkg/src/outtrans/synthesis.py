"""Synthetic QE data construction and quota-respecting span sampling.

Training triplets for a new source language are made by machine-translating
the source side of existing (source, target, tags) triplets; the target
sentences and their tags are carried over untouched.
"""

from __future__ import annotations

import random

from .errors import InfeasibleQuota, SynthesisError
from .mt import Engine, translate
from .qe import QETriple

__all__ = ["synthesize", "span_sample"]


def synthesize(
    triples: list[QETriple],
    source_mt: Engine,
    src_lang: str | None = None,
    tgt_lang: str | None = None,
) -> list[QETriple]:
    """Rewrite each triple's source through ``source_mt``; all else unchanged.

    Output order equals input order and the target/tags of triple k are the
    same objects' content, byte for byte. Any engine failure aborts the
    whole run with the failing index; nothing partial is returned.
    """
    if src_lang is None or tgt_lang is None:
        src_lang, tgt_lang = source_mt.sole_pair()
    out = []
    for index, triple in enumerate(triples):
        try:
            translated = translate(
                source_mt, src_lang, tgt_lang, " ".join(triple.source)
            )
        except Exception as exc:
            raise SynthesisError(index, exc) from exc
        out.append(
            QETriple(
                source=translated.split(),
                target=list(triple.target),
                tags=list(triple.tags),
            )
        )
    return out


def span_sample(
    counts: dict[int, int], quota: dict[int, int], seed: int
) -> dict[int, list[int]]:
    """Sample ``quota[k]`` span ids without replacement from each bucket k.

    Span ids are 0-based indices within their bucket. Sampling is uniform
    and fully determined by ``seed``; buckets with zero quota are omitted.
    """
    for bucket, wanted in sorted(quota.items()):
        if wanted < 0:
            raise ValueError(f"bucket {bucket}: negative quota")
        available = counts.get(bucket, 0)
        if wanted > available:
            raise InfeasibleQuota(bucket, wanted, available)
    rng = random.Random(seed)
    selection: dict[int, list[int]] = {}
    for bucket in sorted(quota):
        wanted = quota[bucket]
        if wanted == 0:
            continue
        selection[bucket] = sorted(rng.sample(range(counts[bucket]), wanted))
    return selection
