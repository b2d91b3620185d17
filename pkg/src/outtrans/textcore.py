"""Word-level tokenization and sequence similarity.

Every other module works on token sequences produced here: lists of
non-empty, whitespace-free strings. Similarity is Ratcliff-Obershelp
(gestalt pattern matching) computed over whole tokens, not characters.
"""

from __future__ import annotations

import unicodedata

__all__ = ["tokenize", "gestalt_similarity"]


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Split ``text`` into word tokens.

    Splits on Unicode whitespace, then detaches leading and trailing
    punctuation characters (Unicode category P) as separate single-character
    tokens. Interior punctuation stays attached, so ``"e-mail"`` and
    ``"don't"`` are single tokens while ``"Rathaus?"`` becomes two.

    Joining the result with single spaces and tokenizing again yields the
    same sequence; empty input yields an empty list.
    """
    tokens: list[str] = []
    for chunk in text.split():
        i, j = 0, len(chunk)
        while i < j and _is_punct(chunk[i]):
            i += 1
        while j > i and _is_punct(chunk[j - 1]):
            j -= 1
        tokens.extend(chunk[:i])
        if i < j:
            tokens.append(chunk[i:j])
        tokens.extend(chunk[j:])
    return tokens


def _longest_block(
    a: list[str], b: list[str], alo: int, ahi: int, blo: int, bhi: int
) -> tuple[int, int, int]:
    """Longest contiguous block common to a[alo:ahi] and b[blo:bhi].

    Returns (i, j, size). Ties are broken by the earliest start in ``a``,
    then the earliest start in ``b``; scanning both ranges in ascending
    order with a strictly-greater test gives exactly that.
    """
    besti, bestj, bestsize = alo, blo, 0
    # j2len[j] = length of the common run ending at a[i], b[j]
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        for j in range(blo, bhi):
            if b[j] == a[i]:
                k = j2len.get(j - 1, 0) + 1
                newj2len[j] = k
                if k > bestsize:
                    besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def _matched(a: list[str], b: list[str], alo: int, ahi: int, blo: int, bhi: int) -> int:
    i, j, size = _longest_block(a, b, alo, ahi, blo, bhi)
    if size == 0:
        return 0
    return (
        size
        + _matched(a, b, alo, i, blo, j)
        + _matched(a, b, i + size, ahi, j + size, bhi)
    )


def gestalt_similarity(a: list[str], b: list[str]) -> float:
    """Ratcliff-Obershelp similarity of two token sequences, in [0, 1].

    Computes 2*M / (len(a) + len(b)) where M is the total number of tokens
    covered by matching blocks: the longest contiguous common block is
    located, then the procedure recurses on the pieces to its left and to
    its right. Two empty sequences are defined to be identical (1.0).
    """
    if not a and not b:
        return 1.0
    return 2.0 * _matched(a, b, 0, len(a), 0, len(b)) / (len(a) + len(b))
