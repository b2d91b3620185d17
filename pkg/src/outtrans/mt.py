"""Machine translation gateway: engine registry, remote adapters, mocks.

Engines are immutable descriptors plus a stateless call; the registry lets
callers pick one by id at request time. Inputs over an engine's token limit
are rejected outright -- silent truncation would lose context the author
cannot check.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (
    GatewayError,
    LengthLimitExceeded,
    NonBijectiveDictionary,
    RemoteFailure,
    UnknownEngine,
    UnsupportedPair,
)
from .textcore import tokenize

__all__ = [
    "Engine",
    "MockEngine",
    "RemoteEngine",
    "EngineRegistry",
    "TranslationTriplet",
    "translate",
    "make_reversible_mock",
    "round_trip",
    "load_registry",
]

DEFAULT_TOKEN_LIMIT = 100

LanguagePair = tuple[str, str]


@dataclass
class TranslationTriplet:
    """Source input, forward translation, and its backward translation."""

    txt1: str
    txt2: str
    txt3: str


class Engine:
    """An MT engine descriptor with a stateless translate call."""

    kind = "abstract"

    def __init__(
        self,
        engine_id: str,
        supported_pairs: set[LanguagePair],
        token_limit: int = DEFAULT_TOKEN_LIMIT,
    ):
        if token_limit < 1:
            raise ValueError("token_limit must be >= 1")
        self.id = engine_id
        self.supported_pairs = frozenset(tuple(p) for p in supported_pairs)
        self.token_limit = token_limit

    def describe(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "pairs": sorted(list(p) for p in self.supported_pairs),
            "token_limit": self.token_limit,
        }

    def sole_pair(self) -> LanguagePair:
        if len(self.supported_pairs) != 1:
            raise ValueError(f"engine {self.id} supports more than one pair")
        return next(iter(self.supported_pairs))

    def _translate(self, src_lang: str, tgt_lang: str, text: str) -> str:
        raise NotImplementedError


class MockEngine(Engine):
    """Deterministic token-map engine; unknown tokens pass through."""

    kind = "mock"

    def __init__(
        self,
        engine_id: str,
        mapping: dict[str, str],
        supported_pairs: set[LanguagePair],
        token_limit: int = DEFAULT_TOKEN_LIMIT,
    ):
        super().__init__(engine_id, supported_pairs, token_limit)
        self.mapping = dict(mapping)

    def _translate(self, src_lang: str, tgt_lang: str, text: str) -> str:
        return " ".join(self.mapping.get(tok, tok) for tok in text.split())


class RemoteEngine(Engine):
    """JSON-over-HTTP adapter: POST {src, tgt, text} -> {text}.

    One retry on transient failures (connection errors, timeouts, 5xx),
    then RemoteFailure. A semaphore caps concurrent in-flight requests.
    """

    kind = "remote"

    def __init__(
        self,
        engine_id: str,
        base_url: str,
        supported_pairs: set[LanguagePair],
        token_limit: int = DEFAULT_TOKEN_LIMIT,
        timeout: float = 10.0,
        max_in_flight: int = 4,
    ):
        super().__init__(engine_id, supported_pairs, token_limit)
        self.base_url = base_url
        self.timeout = timeout
        self._slots = threading.Semaphore(max_in_flight)
        self._session = requests.Session()

    def _post_once(self, payload: dict) -> requests.Response:
        with self._slots:
            return self._session.post(self.base_url, json=payload, timeout=self.timeout)

    def _translate(self, src_lang: str, tgt_lang: str, text: str) -> str:
        payload = {"src": src_lang, "tgt": tgt_lang, "text": text}
        response = None
        for attempt in (0, 1):
            try:
                response = self._post_once(payload)
            except requests.RequestException as exc:
                if attempt == 1:
                    raise RemoteFailure(None, f"request failed: {exc}") from exc
                continue
            if response.status_code >= 500 and attempt == 0:
                continue
            break
        if not 200 <= response.status_code < 300:
            raise RemoteFailure(response.status_code)
        try:
            return response.json()["text"]
        except (ValueError, KeyError) as exc:
            raise RemoteFailure(response.status_code, "malformed response body") from exc


def translate(engine: Engine, src_lang: str, tgt_lang: str, text: str) -> str:
    """Translate ``text``, enforcing the pair and token-limit contracts."""
    if (src_lang, tgt_lang) not in engine.supported_pairs:
        raise UnsupportedPair(
            f"engine {engine.id} does not support {src_lang}->{tgt_lang}"
        )
    n_tokens = len(tokenize(text))
    if n_tokens > engine.token_limit:
        raise LengthLimitExceeded(n_tokens, engine.token_limit)
    return engine._translate(src_lang, tgt_lang, text)


def make_reversible_mock(
    dictionary: dict[str, str],
    token_limit: int = DEFAULT_TOKEN_LIMIT,
    src_lang: str = "cs",
    tgt_lang: str = "de",
    id_prefix: str = "mock",
) -> tuple[MockEngine, MockEngine]:
    """Build a (forward, backward) mock pair from a bijective token map.

    backward(forward(x)) == x whenever x's tokens stay clear of the
    dictionary's value range.
    """
    if len(set(dictionary.values())) != len(dictionary):
        raise NonBijectiveDictionary("dictionary values are not distinct")
    inverse = {v: k for k, v in dictionary.items()}
    forward = MockEngine(id_prefix, dictionary, {(src_lang, tgt_lang)}, token_limit)
    backward = MockEngine(
        f"{id_prefix}:back", inverse, {(tgt_lang, src_lang)}, token_limit
    )
    return forward, backward


def round_trip(
    forward: Engine,
    backward: Engine,
    text: str,
    src_lang: str | None = None,
    tgt_lang: str | None = None,
) -> TranslationTriplet:
    """Translate forward then back; failures name the leg, never a partial triplet."""
    if not text:
        raise ValueError("text must be non-empty")
    if src_lang is None or tgt_lang is None:
        src_lang, tgt_lang = forward.sole_pair()
    try:
        txt2 = translate(forward, src_lang, tgt_lang, text)
    except GatewayError as exc:
        exc.leg = "forward"
        raise
    try:
        txt3 = translate(backward, tgt_lang, src_lang, txt2)
    except GatewayError as exc:
        exc.leg = "backward"
        raise
    return TranslationTriplet(txt1=text, txt2=txt2, txt3=txt3)


class EngineRegistry:
    """Engines by id; lookup fails closed on unknown ids."""

    def __init__(self):
        self._engines: dict[str, Engine] = {}

    def register(self, engine: Engine) -> None:
        if engine.id in self._engines:
            raise ValueError(f"duplicate engine id {engine.id!r}")
        self._engines[engine.id] = engine

    def get(self, engine_id: str) -> Engine:
        try:
            return self._engines[engine_id]
        except KeyError:
            raise UnknownEngine(f"no engine registered as {engine_id!r}") from None

    def ids(self) -> list[str]:
        return list(self._engines)

    def describe(self) -> list[dict]:
        return [engine.describe() for engine in self._engines.values()]

    def resolve_round_trip(
        self, engine_id: str, src_lang: str, tgt_lang: str
    ) -> tuple[Engine, Engine]:
        """Forward engine for (src, tgt) plus an engine for the way back.

        The same engine is reused when it serves both directions; otherwise
        the conventional ``<id>:back`` companion is looked up.
        """
        forward = self.get(engine_id)
        if (src_lang, tgt_lang) not in forward.supported_pairs:
            raise UnsupportedPair(
                f"engine {engine_id} does not support {src_lang}->{tgt_lang}"
            )
        if (tgt_lang, src_lang) in forward.supported_pairs:
            return forward, forward
        backward = self.get(f"{engine_id}:back")
        if (tgt_lang, src_lang) not in backward.supported_pairs:
            raise UnsupportedPair(
                f"engine {backward.id} does not support {tgt_lang}->{src_lang}"
            )
        return forward, backward


def load_registry(config: dict, base_dir: str | Path = ".") -> EngineRegistry:
    """Build a registry from a configuration mapping.

    ``config["engines"]`` lists entries with id, kind, language pairs and an
    optional token_limit. Mock entries name a JSON token dictionary (or give
    one inline) and register both directions; remote entries name a base URL.
    """
    base_dir = Path(base_dir)
    registry = EngineRegistry()
    for entry in config.get("engines", []):
        engine_id = entry["id"]
        kind = entry["kind"]
        pairs = {tuple(p) for p in entry["pairs"]}
        token_limit = entry.get("token_limit", DEFAULT_TOKEN_LIMIT)
        if kind == "mock":
            if "dictionary" in entry:
                dict_path = base_dir / entry["dictionary"]
                mapping = json.loads(dict_path.read_text(encoding="utf-8"))
            else:
                mapping = entry.get("mapping", {})
            if len(pairs) != 1:
                raise ValueError(f"mock engine {engine_id} needs exactly one pair")
            src_lang, tgt_lang = next(iter(pairs))
            forward, backward = make_reversible_mock(
                mapping, token_limit, src_lang, tgt_lang, id_prefix=engine_id
            )
            registry.register(forward)
            registry.register(backward)
        elif kind == "remote":
            registry.register(
                RemoteEngine(
                    engine_id,
                    entry["base_url"],
                    pairs,
                    token_limit,
                    timeout=entry.get("timeout", 10.0),
                    max_in_flight=entry.get("max_in_flight", 4),
                )
            )
        else:
            raise ValueError(f"unknown engine kind {kind!r}")
    return registry
