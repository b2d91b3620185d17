"""Word-level OK/BAD quality tags, source projection, and the tags file codec.

Tags live on target tokens; ``project_to_source`` carries them over
alignment links onto the source sentence as highlight intensities in
[0, 1]. File I/O follows the shared-task convention of ``.src``/``.mt``/
``.tags`` files, one whitespace-tokenized sentence per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .aligner import AlignmentLink, LexiconModel, NULL
from .errors import CorpusFormatError, IndexOutOfRange, LengthMismatch, UnknownTag

OK = "OK"
BAD = "BAD"

__all__ = [
    "OK",
    "BAD",
    "QETriple",
    "estimate_lexical",
    "project_to_source",
    "parse_wmt_tags",
    "serialize_wmt_tags",
    "read_wmt_triplets",
    "write_wmt_triplets",
]


@dataclass
class QETriple:
    """A (source tokens, target tokens, per-target-token tags) record."""

    source: list[str]
    target: list[str]
    tags: list[str]

    def __post_init__(self):
        if len(self.tags) != len(self.target):
            raise LengthMismatch(
                f"{len(self.tags)} tags for {len(self.target)} target tokens"
            )


def estimate_lexical(
    model: LexiconModel,
    source: list[str],
    target: list[str],
    threshold: float = 0.1,
) -> list[str]:
    """Baseline estimator: a target token is OK iff the lexicon backs it.

    Token j is OK when max over the source tokens (and NULL) of
    t(target_j | source_i) reaches ``threshold``; out-of-vocabulary target
    tokens are BAD.
    """
    if not source or not target:
        raise ValueError("source and target must be non-empty")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    tags = []
    for tt in target:
        if tt not in model.target_vocab:
            tags.append(BAD)
            continue
        best = model.prob(tt, NULL)
        for s in source:
            p = model.prob(tt, s)
            if p > best:
                best = p
        tags.append(OK if best >= threshold else BAD)
    return tags


def project_to_source(
    tagging: list[str], links: list[AlignmentLink], source_len: int
) -> list[float]:
    """Transfer target tags onto source tokens as highlight intensities.

    BAD maps to 1.0 and OK to 0.0; each source token takes the maximum
    intensity over all target tokens linked to it, and unlinked source
    tokens stay at 0.0. NULL links contribute nothing.
    """
    intensities = [0.0] * source_len
    for src_idx, tgt_idx in links:
        if not 0 <= tgt_idx < len(tagging):
            raise IndexOutOfRange(f"target index {tgt_idx} outside tagging")
        if src_idx is NULL:
            continue
        if not 0 <= src_idx < source_len:
            raise IndexOutOfRange(f"source index {src_idx} outside sentence")
        value = 1.0 if tagging[tgt_idx] == BAD else 0.0
        if value > intensities[src_idx]:
            intensities[src_idx] = value
    return intensities


def parse_wmt_tags(
    tokens_line: str, tags_line: str, gapped: bool = False
) -> tuple[list[str], list[str]]:
    """Parse one tokens line and its tags line into (tokens, tags).

    Both lines are whitespace-split and only the literals OK and BAD are
    accepted. In gapped mode a line of 2n+1 tags (gap, word, gap, ...) is
    reduced to the n word tags; otherwise counts must match exactly.
    """
    tokens = tokens_line.split()
    tags = tags_line.split()
    if gapped and len(tags) == 2 * len(tokens) + 1:
        for tag in tags:
            if tag not in (OK, BAD):
                raise UnknownTag(f"unknown tag literal {tag!r}")
        tags = tags[1::2]
    if len(tags) != len(tokens):
        raise LengthMismatch(f"{len(tokens)} tokens but {len(tags)} tags")
    for tag in tags:
        if tag not in (OK, BAD):
            raise UnknownTag(f"unknown tag literal {tag!r}")
    return tokens, tags


def serialize_wmt_tags(tagging: list[str]) -> str:
    """Space-joined tag line; inverse of parse_wmt_tags for any tagging."""
    return " ".join(tagging)


def read_wmt_triplets(
    src_path: str | Path, mt_path: str | Path, tags_path: str | Path
) -> list[QETriple]:
    """Read the .src/.mt/.tags file triplet, one QETriple per line."""
    src_lines = Path(src_path).read_text(encoding="utf-8").splitlines()
    mt_lines = Path(mt_path).read_text(encoding="utf-8").splitlines()
    tag_lines = Path(tags_path).read_text(encoding="utf-8").splitlines()
    if not len(src_lines) == len(mt_lines) == len(tag_lines):
        raise CorpusFormatError(
            f"line counts differ: {len(src_lines)} src, "
            f"{len(mt_lines)} mt, {len(tag_lines)} tags"
        )
    triples = []
    for i, (src, mt, tags) in enumerate(zip(src_lines, mt_lines, tag_lines)):
        try:
            target, tagging = parse_wmt_tags(mt, tags)
        except (LengthMismatch, UnknownTag) as exc:
            raise type(exc)(f"line {i + 1}: {exc}") from exc
        triples.append(QETriple(source=src.split(), target=target, tags=tagging))
    return triples


def write_wmt_triplets(
    triples: list[QETriple],
    src_path: str | Path,
    mt_path: str | Path,
    tags_path: str | Path,
) -> None:
    """Write triples back out as the .src/.mt/.tags file triplet."""
    with open(src_path, "w", encoding="utf-8") as src_f, open(
        mt_path, "w", encoding="utf-8"
    ) as mt_f, open(tags_path, "w", encoding="utf-8") as tags_f:
        for triple in triples:
            src_f.write(" ".join(triple.source) + "\n")
            mt_f.write(" ".join(triple.target) + "\n")
            tags_f.write(serialize_wmt_tags(triple.tags) + "\n")
