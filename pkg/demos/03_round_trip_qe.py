"""The full assist round: translate, back-translate, tag, project.

Run with: python demos/03_round_trip_qe.py
"""

from outtrans import (
    ParallelCorpus,
    align,
    estimate_lexical,
    extend_lexicon,
    make_reversible_mock,
    mix_with_baseline,
    project_to_source,
    round_trip,
    tokenize,
    train_lexicon,
)

# A deterministic reversible engine pair stands in for the real MT models;
# one dictionary entry deliberately "hallucinates" an extra word the way a
# weak engine sometimes does.
forward, backward = make_reversible_mock(
    {"ahoj": "hallo", "světe": "Welt", "kde": "wo", "je": "ist"}
)
faulty_forward, _ = make_reversible_mock({"ahoj": "hallo UNSINN"}, id_prefix="faulty")

baseline = ParallelCorpus(
    [(["ahoj", f"s{i}"], ["hallo", f"t{i}"]) for i in range(12)]
)
model = train_lexicon(baseline, iterations=5)

for engine, text in [(forward, "ahoj světe"), (faulty_forward, "ahoj")]:
    triplet = round_trip(engine, backward, text)
    print(f"input:    {triplet.txt1}")
    print(f"forward:  {triplet.txt2}")
    print(f"backward: {triplet.txt3}")

    source = tokenize(triplet.txt1)
    target = tokenize(triplet.txt2)
    mixed = mix_with_baseline((source, target), baseline)
    query_model = extend_lexicon(model, mixed, iterations=1)

    tags = estimate_lexical(query_model, source, target, threshold=0.1)
    links = align(query_model, source, target)
    highlight = project_to_source(tags, links, len(source))

    print("tags:     ", list(zip(target, tags)))
    print("highlight:", list(zip(source, highlight)))
    print()
