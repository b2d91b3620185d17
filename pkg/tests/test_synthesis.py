import random

import pytest

from outtrans.errors import InfeasibleQuota, SynthesisError
from outtrans.mt import Engine, MockEngine
from outtrans.qe import BAD, OK, QETriple
from outtrans.synthesis import span_sample, synthesize


class RecordingScrambleEngine(Engine):
    """Randomizes the source text but records every call for inspection."""

    kind = "mock"

    def __init__(self, seed=0):
        super().__init__("scramble", {("en", "cs")}, token_limit=10_000)
        self._rng = random.Random(seed)
        self.calls = []

    def _translate(self, src_lang, tgt_lang, text):
        tokens = text.split()
        self._rng.shuffle(tokens)
        out = " ".join(f"cs:{tok}" for tok in tokens)
        self.calls.append((text, out))
        return out


class FailingEngine(Engine):
    kind = "mock"

    def __init__(self, fail_at):
        super().__init__("flaky", {("en", "cs")}, token_limit=10_000)
        self.fail_at = fail_at
        self.calls = 0

    def _translate(self, src_lang, tgt_lang, text):
        if self.calls == self.fail_at:
            raise RuntimeError("engine exploded")
        self.calls += 1
        return text


def random_triples(n, seed=0):
    rng = random.Random(seed)
    triples = []
    for i in range(n):
        length = rng.randint(1, 10)
        target = [f"de{i}_{j}" for j in range(length)]
        tags = [rng.choice([OK, BAD]) for _ in range(length)]
        source = [f"en{i}_{j}" for j in range(rng.randint(1, 10))]
        triples.append(QETriple(source=source, target=target, tags=tags))
    return triples


class TestSynthesize:
    def test_identity_engine_preserves_everything(self):
        engine = MockEngine("id", {}, {("en", "cs")}, token_limit=10_000)
        triples = random_triples(10)
        out = synthesize(triples, engine)
        assert out == triples

    def test_targets_and_tags_untouched_order_preserved(self):
        triples = random_triples(100, seed=4)
        out = synthesize(triples, RecordingScrambleEngine(seed=9))
        assert len(out) == len(triples)
        for before, after in zip(triples, out):
            assert after.target == before.target
            assert after.tags == before.tags
            assert after.source != before.source  # source side really rewritten

    def test_sources_come_from_the_engine(self):
        engine = RecordingScrambleEngine(seed=2)
        triples = random_triples(5, seed=1)
        out = synthesize(triples, engine)
        assert [call[0] for call in engine.calls] == [
            " ".join(t.source) for t in triples
        ]
        assert [t.source for t in out] == [call[1].split() for call in engine.calls]

    def test_failure_aborts_with_index(self):
        triples = random_triples(10)
        with pytest.raises(SynthesisError) as excinfo:
            synthesize(triples, FailingEngine(fail_at=7))
        assert excinfo.value.index == 7

    def test_gateway_failure_also_carries_index(self):
        engine = MockEngine("tiny", {}, {("en", "cs")}, token_limit=2)
        triples = [
            QETriple(["a"], ["x"], [OK]),
            QETriple(["a", "b", "c"], ["x"], [OK]),
        ]
        with pytest.raises(SynthesisError) as excinfo:
            synthesize(triples, engine)
        assert excinfo.value.index == 1


PAPER_COUNTS = {1: 81619, 2: 2303, 3: 166, 4: 13, 5: 8, 6: 1}
PAPER_QUOTA = {1: 15, 2: 15, 3: 15, 4: 10, 5: 5, 6: 0}


class TestSpanSample:
    def test_reference_quota_selects_sixty(self):
        selection = span_sample(PAPER_COUNTS, PAPER_QUOTA, seed=42)
        assert sum(len(ids) for ids in selection.values()) == 60
        assert set(selection) == {1, 2, 3, 4, 5}  # zero-quota bucket omitted

    def test_sample_is_within_bucket_and_unique(self):
        selection = span_sample(PAPER_COUNTS, PAPER_QUOTA, seed=7)
        for bucket, ids in selection.items():
            assert len(set(ids)) == len(ids) == PAPER_QUOTA[bucket]
            assert all(0 <= i < PAPER_COUNTS[bucket] for i in ids)

    def test_all_zero_quota(self):
        assert span_sample(PAPER_COUNTS, {k: 0 for k in PAPER_COUNTS}, seed=1) == {}

    def test_deterministic_for_seed(self):
        assert span_sample(PAPER_COUNTS, PAPER_QUOTA, seed=5) == span_sample(
            PAPER_COUNTS, PAPER_QUOTA, seed=5
        )
        assert span_sample(PAPER_COUNTS, PAPER_QUOTA, seed=5) != span_sample(
            PAPER_COUNTS, PAPER_QUOTA, seed=6
        )

    def test_full_quota_returns_every_span(self):
        assert span_sample({3: 4}, {3: 4}, seed=0) == {3: [0, 1, 2, 3]}

    def test_infeasible_quota_names_bucket(self):
        with pytest.raises(InfeasibleQuota) as excinfo:
            span_sample({5: 8}, {5: 9}, seed=0)
        assert excinfo.value.bucket == 5

    def test_unknown_bucket_is_infeasible(self):
        with pytest.raises(InfeasibleQuota):
            span_sample({1: 3}, {2: 1}, seed=0)
