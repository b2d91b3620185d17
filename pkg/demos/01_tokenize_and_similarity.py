"""Tokenization and word-level gestalt similarity.

Run with: python demos/01_tokenize_and_similarity.py
"""

from outtrans import gestalt_similarity, tokenize

# The tokenizer splits on whitespace and detaches leading/trailing
# punctuation, so sentence-final marks become their own tokens while
# interior hyphens and apostrophes stay put.
for text in [
    "Wo ist das Rathaus?",
    '"Moment!", sagte sie.',
    "Die E-Mail kam gestern an…",
]:
    print(f"{text!r}")
    print(f"  -> {tokenize(text)}")

# Similarity is Ratcliff-Obershelp over tokens: the longest common block
# is matched, then the remainders left and right of it, recursively.
pairs = [
    ("Wo ist das Rathaus?", "Wo ist das Rathaus?"),
    ("Wo ist das Rathaus?", "Wo ist hier das Rathaus, bitte?"),
    ("Der Drucker druckt nicht.", "Nichts funktioniert mehr."),
]
print()
for first, second in pairs:
    ratio = gestalt_similarity(tokenize(first), tokenize(second))
    print(f"{ratio:.3f}  {first!r} vs {second!r}")
