import random

import pytest

from outtrans.aligner import (
    NULL,
    LexiconModel,
    ParallelCorpus,
    align,
    extend_lexicon,
    load_parallel_corpus,
    log_likelihood,
    mix_with_baseline,
    train_lexicon,
)
from outtrans.errors import CorpusFormatError, EmptyCorpus, EmptyQuery


def two_sentence_corpus():
    return ParallelCorpus(
        [
            (["das", "haus"], ["the", "house"]),
            (["das", "buch"], ["the", "book"]),
        ]
    )


def identity_model(vocab):
    t = {w: {w: 1.0} for w in vocab}
    t[NULL] = {w: 1.0 / len(vocab) for w in vocab}
    return LexiconModel(t=t, source_vocab=set(vocab), target_vocab=set(vocab))


class TestTrainLexicon:
    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpus):
            train_lexicon(ParallelCorpus([]), iterations=1)

    def test_single_pair_distributions_normalize(self):
        # "a" and NULL each co-occur with "x" only, so both conditionals
        # collapse to 1.0; the symmetric 0.5/0.5 split shows up in the
        # expected counts, not the normalized table.
        model = train_lexicon(ParallelCorpus([(["a"], ["x"])]), iterations=1)
        assert model.prob("x", "a") == pytest.approx(1.0)
        assert model.prob("x", NULL) == pytest.approx(1.0)

    def test_classic_corpus_disambiguates_the(self):
        model = train_lexicon(two_sentence_corpus(), iterations=10)
        dist = model.t["das"]
        assert max(dist, key=dist.get) == "the"
        assert model.prob("the", "das") > 0.9

    def test_distributions_sum_to_one(self):
        model = train_lexicon(two_sentence_corpus(), iterations=7)
        for source, dist in model.t.items():
            assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9), source

    def test_null_floor_keeps_null_reachable(self):
        model = train_lexicon(
            two_sentence_corpus(), iterations=10, null_prob_floor=0.05
        )
        for target in model.target_vocab:
            assert model.prob(target, NULL) >= 0.05 - 1e-12
        assert sum(model.t[NULL].values()) == pytest.approx(1.0, abs=1e-9)

    def test_log_likelihood_non_decreasing(self):
        rng = random.Random(7)
        vocab_src = [f"s{i}" for i in range(8)]
        vocab_tgt = [f"t{i}" for i in range(8)]
        for trial in range(5):
            pairs = [
                (
                    [rng.choice(vocab_src) for _ in range(rng.randint(1, 5))],
                    [rng.choice(vocab_tgt) for _ in range(rng.randint(1, 5))],
                )
                for _ in range(rng.randint(2, 12))
            ]
            corpus = ParallelCorpus(pairs)
            previous = None
            for iterations in range(1, 8):
                model = train_lexicon(corpus, iterations=iterations)
                ll = log_likelihood(model, corpus)
                if previous is not None:
                    assert ll >= previous - 1e-9
                previous = ll


class TestMixWithBaseline:
    def test_query_appended_last(self):
        baseline = two_sentence_corpus()
        query = (["wo"], ["where"])
        mixed = mix_with_baseline(query, baseline)
        assert len(mixed) == 3
        assert mixed.pairs[-1] == query
        assert mixed.pairs[:2] == baseline.pairs

    def test_empty_baseline(self):
        query = (["wo"], ["where"])
        assert mix_with_baseline(query, ParallelCorpus([])).pairs == [query]

    def test_duplicate_kept(self):
        baseline = two_sentence_corpus()
        query = (["das", "haus"], ["the", "house"])
        assert len(mix_with_baseline(query, baseline)) == 3

    def test_empty_query_rejected(self):
        with pytest.raises(EmptyQuery):
            mix_with_baseline(([], ["x"]), ParallelCorpus([]))
        with pytest.raises(EmptyQuery):
            mix_with_baseline((["x"], []), ParallelCorpus([]))


class TestAlign:
    def test_identity_model_diagonal(self):
        model = identity_model(["a", "b"])
        assert align(model, ["a", "b"], ["a", "b"]) == [(0, 0), (1, 1)]

    def test_oov_target_links_to_null(self):
        model = identity_model(["a"])
        assert align(model, ["a"], ["zzz"]) == [(NULL, 0)]

    def test_trained_model_aligns_classic_pair(self):
        model = train_lexicon(two_sentence_corpus(), iterations=10)
        links = align(model, ["das", "haus"], ["the", "house"])
        assert (0, 0) in links  # the -> das
        assert (1, 1) in links  # house -> haus

    def test_one_link_per_target(self):
        model = train_lexicon(two_sentence_corpus(), iterations=3)
        links = align(model, ["das", "buch"], ["the", "book", "the"])
        assert sorted(tgt for _, tgt in links) == [0, 1, 2]

    def test_null_wins_only_on_strict_excess(self):
        t = {
            "a": {"x": 0.4},
            NULL: {"x": 0.4},
        }
        model = LexiconModel(t=t, source_vocab={"a"}, target_vocab={"x"})
        assert align(model, ["a"], ["x"]) == [(0, 0)]
        model.t[NULL]["x"] = 0.5
        assert align(model, ["a"], ["x"]) == [(NULL, 0)]

    def test_argmax_tie_takes_smallest_source_index(self):
        t = {
            "a": {"x": 0.5},
            "b": {"x": 0.5},
            NULL: {"x": 0.1},
        }
        model = LexiconModel(t=t, source_vocab={"a", "b"}, target_vocab={"x"})
        assert align(model, ["b", "a"], ["x"]) == [(0, 0)]

    def test_empty_sides_rejected(self):
        model = identity_model(["a"])
        with pytest.raises(ValueError):
            align(model, [], ["a"])
        with pytest.raises(ValueError):
            align(model, ["a"], [])


class TestExtendLexicon:
    def test_new_vocabulary_becomes_alignable(self):
        # "das" already carries strong evidence for "the", so the one new
        # co-occurrence pushes "dog" toward "hund" rather than splitting.
        baseline = two_sentence_corpus()
        model = train_lexicon(baseline, iterations=5)
        query = (["das", "hund"], ["the", "dog"])
        mixed = mix_with_baseline(query, baseline)
        updated = extend_lexicon(model, mixed, iterations=1)
        assert "dog" in updated.target_vocab
        assert updated.prob("dog", "hund") > updated.prob("dog", "das")
        links = align(updated, ["das", "hund"], ["the", "dog"])
        assert (1, 1) in links

    def test_original_model_not_mutated(self):
        baseline = two_sentence_corpus()
        model = train_lexicon(baseline, iterations=5)
        before = {s: dict(d) for s, d in model.t.items()}
        extend_lexicon(model, mix_with_baseline((["neu"], ["new"]), baseline))
        assert model.t == before
        assert "new" not in model.target_vocab

    def test_distributions_stay_normalized(self):
        baseline = two_sentence_corpus()
        model = train_lexicon(baseline, iterations=5)
        updated = extend_lexicon(
            model, mix_with_baseline((["der", "hund"], ["the", "dog"]), baseline)
        )
        for source, dist in updated.t.items():
            assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9), source


class TestCorpusLoading:
    def test_round_trips_paired_lines(self, tmp_path):
        src = tmp_path / "corpus.cs"
        tgt = tmp_path / "corpus.de"
        src.write_text("ahoj světe\nkde je nádraží ?\n", encoding="utf-8")
        tgt.write_text("hallo Welt\nwo ist der Bahnhof ?\n", encoding="utf-8")
        corpus = load_parallel_corpus(src, tgt)
        assert len(corpus) == 2
        assert corpus.pairs[0] == (["ahoj", "světe"], ["hallo", "Welt"])

    def test_unequal_line_counts_rejected(self, tmp_path):
        src = tmp_path / "a.src"
        tgt = tmp_path / "a.tgt"
        src.write_text("eins\nzwei\n", encoding="utf-8")
        tgt.write_text("one\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError):
            load_parallel_corpus(src, tgt)

    def test_blank_pairs_dropped(self, tmp_path):
        src = tmp_path / "b.src"
        tgt = tmp_path / "b.tgt"
        src.write_text("eins\n\nzwei\n", encoding="utf-8")
        tgt.write_text("one\n\ntwo\n", encoding="utf-8")
        assert len(load_parallel_corpus(src, tgt)) == 2
