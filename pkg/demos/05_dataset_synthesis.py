"""Synthesizing QE training data for a new source language.

Run with: python demos/05_dataset_synthesis.py
"""

from outtrans import MockEngine, QETriple, span_sample, synthesize

# (source, target, tags) triplets in the original language pair;
# the tags mark target tokens a QE model should learn to flag
triples = [
    QETriple(
        source="use the Video Properties dialog box".split(),
        target="im Dialogfeld Videoeigenschaften verwenden".split(),
        tags=["OK", "OK", "BAD", "OK"],
    ),
    QETriple(
        source="click Save".split(),
        target="auf Speichern klicken".split(),
        tags=["OK", "OK", "OK"],
    ),
]

# translating only the source side yields training data for the new pair;
# targets and tags are carried over untouched
engine = MockEngine(
    "en-cs",
    {"use": "použijte", "the": "", "click": "klikněte", "Save": "Uložit"},
    {("en", "cs")},
)
for triple in synthesize(triples, engine):
    print("source:", " ".join(triple.source))
    print("target:", " ".join(triple.target))
    print("tags:  ", " ".join(triple.tags))
    print()

# quota-respecting span selection: buckets are questions-per-span, the
# quota says how many spans to draw from each bucket
counts = {1: 81619, 2: 2303, 3: 166, 4: 13, 5: 8, 6: 1}
quota = {1: 15, 2: 15, 3: 15, 4: 10, 5: 5, 6: 0}
selection = span_sample(counts, quota, seed=42)
total = sum(len(ids) for ids in selection.values())
print(f"selected {total} spans:")
for bucket in sorted(selection):
    ids = selection[bucket]
    print(f"  bucket {bucket}: {len(ids)} spans, first few ids {ids[:5]}")
