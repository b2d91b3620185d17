"""Logging a session, replaying it, and running the study reports.

Run with: python demos/04_event_log_analytics.py
"""

import tempfile
from pathlib import Path

from outtrans import EventLog, EventRecord, replay_log
from outtrans.analytics import (
    ALL_DOMAINS,
    duration_report,
    label_segments,
    segment_report,
    similarity_report,
    Stimulus,
)

log_path = Path(tempfile.mkdtemp()) / "session.jsonl"
log = EventLog(log_path)

# one user session: a stimulus is shown, the input grows, gets reworked
# once, and is finally confirmed
session = "demo-user"
events = [
    ("START", {"queue": "q-demo"}),
    ("NEXT", {"sid": "st1", "reason": "shown"}),
    ("TRANSLATE1", {"txt1": "Wo ist", "txt2": "KDE JE"}),
    ("TRANSLATE1", {"txt1": "Wo ist Rathaus?", "txt2": "KDE JE RADNICE?"}),
    ("TRANSLATE1", {"txt1": "Wo ist das Rathaus?", "txt2": "KDE JE TA RADNICE?"}),
    ("CONFIRM", {"sid": "st1", "txt1": "Wo ist das Rathaus?",
                 "txt2": "KDE JE TA RADNICE?"}),
    ("NEXT", {"sid": "st2", "reason": "shown"}),
    ("SKIP", {"reason": "MT quality too low"}),
]
for offset, (code, payload) in enumerate(events):
    log.append(EventRecord(ts=1000.0 + 30.0 * offset, session=session,
                           code=code, payload=payload))

print(f"wrote {len(events)} events to {log_path}\n")
print(log_path.read_text(encoding="utf-8"))

result = replay_log(log_path.read_text(encoding="utf-8").splitlines())
stimuli = {
    "st1": Stimulus("st1", "wiki", "Kde je radnice?"),
    "st2": Stimulus("st2", "tech", "Tiskárna netiskne"),
}
labelled = label_segments(result.sessions, stimuli)

counts = segment_report(labelled)[ALL_DOMAINS]
print(f"segments: {counts.segments}  finished: {counts.finished}  "
      f"skipped: {counts.skipped}  with edits: {counts.with_edits}")

for domain, row in duration_report(labelled).items():
    print(f"duration[{domain}]: {row.count} segment(s), "
          f"mean {round(row.mean_seconds)}s")

for domain, row in similarity_report(labelled).items():
    if row.input_similarity is not None:
        print(f"similarity[{domain}]: input {row.input_similarity:.0%}, "
              f"translation {row.translation_similarity:.0%}")
