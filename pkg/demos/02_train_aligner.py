"""Training the lexicon with EM and aligning new sentence pairs.

Run with: python demos/02_train_aligner.py
"""

from outtrans import (
    ParallelCorpus,
    align,
    extend_lexicon,
    log_likelihood,
    mix_with_baseline,
    train_lexicon,
)

# a miniature in-domain baseline corpus (Czech - German)
baseline = ParallelCorpus(
    [
        (["kde", "je", "nádraží", "?"], ["wo", "ist", "der", "Bahnhof", "?"]),
        (["kde", "je", "pošta", "?"], ["wo", "ist", "die", "Post", "?"]),
        (["tiskárna", "netiskne"], ["der", "Drucker", "druckt", "nicht"]),
        (["tiskárna", "je", "rozbitá"], ["der", "Drucker", "ist", "kaputt"]),
        (["dobrý", "den"], ["guten", "Tag"]),
    ]
)

model = train_lexicon(baseline, iterations=10)
print("log-likelihood:", round(log_likelihood(model, baseline), 3))
print("most likely translations of 'tiskárna':")
for target, prob in sorted(model.t["tiskárna"].items(), key=lambda kv: -kv[1])[:3]:
    print(f"  {target:10s} {prob:.3f}")

# Live queries are short, so they are mixed with the baseline and folded
# into the trained model with one incremental EM pass.
query = (["kde", "je", "tiskárna", "?"], ["wo", "ist", "der", "Drucker", "?"])
mixed = mix_with_baseline(query, baseline)
updated = extend_lexicon(model, mixed, iterations=1)

links = align(updated, *query)
print("\nalignment for the query pair:")
source, target = query
for src_idx, tgt_idx in links:
    src_word = "(NULL)" if src_idx is None else source[src_idx]
    print(f"  {target[tgt_idx]:10s} <- {src_word}")
