"""Outbound translation assistance toolkit.

Translate a message into a language you cannot read, translate it back,
tag the translation's words as OK or BAD, and project those tags onto the
source text through a word alignment -- plus the event log, replay, and
study analytics around that loop.
"""

from .aligner import (
    LexiconModel,
    NULL,
    ParallelCorpus,
    align,
    extend_lexicon,
    load_parallel_corpus,
    log_likelihood,
    mix_with_baseline,
    train_lexicon,
)
from .analytics import (
    ConfusionMatrix,
    RatingRecord,
    Segment,
    SegmentClass,
    TTestResult,
    classify_segment,
    confusion_matrix,
    duration_report,
    first_viable,
    paired_t_test,
    rating_report,
    segment_events,
    segment_report,
    similarity_report,
)
from .eventlog import EventLog, EventRecord, ReplayResult, Session, replay_log
from .mt import (
    Engine,
    EngineRegistry,
    MockEngine,
    RemoteEngine,
    TranslationTriplet,
    make_reversible_mock,
    round_trip,
    translate,
)
from .qe import (
    BAD,
    OK,
    QETriple,
    estimate_lexical,
    parse_wmt_tags,
    project_to_source,
    read_wmt_triplets,
    serialize_wmt_tags,
    write_wmt_triplets,
)
from .synthesis import span_sample, synthesize
from .textcore import gestalt_similarity, tokenize

__version__ = "0.1.0"
