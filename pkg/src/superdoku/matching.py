"""Mapping a natural-language teaching intention onto dictionary concepts.

Two backends share one contract: a deterministic lexicon matcher (the
default, and the only one used in tests) and an optional remote LLM
backend speaking a chat-completion-style JSON protocol. Whatever the
backend, the returned concepts are always a subset of the dictionary.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass
from enum import Enum

import httpx

from .concepts import DICTIONARY, ConceptDictionary, ConceptId
from .errors import (
    BackendUnavailable,
    IntentionEmpty,
    IntentionTooLong,
    MalformedBackendResponse,
)

logger = logging.getLogger(__name__)

MAX_INTENTION_WORDS = 10


@dataclass(frozen=True)
class Intention:
    """A teaching intention: non-empty, at most 10 whitespace-separated words.

    Hyphenated compounds count as one word; the limit is enforced on raw
    whitespace tokenization, before any normalization.
    """

    text: str

    def __post_init__(self) -> None:
        words = self.text.split()
        if not words:
            raise IntentionEmpty("intention is empty")
        if len(words) > MAX_INTENTION_WORDS:
            raise IntentionTooLong(
                f"intention has {len(words)} words, limit is {MAX_INTENTION_WORDS}"
            )

    @property
    def word_count(self) -> int:
        return len(self.text.split())


class MatcherBackend(str, Enum):
    LEXICON = "lexicon"
    LLM = "llm"


@dataclass(frozen=True)
class MatchResult:
    """Key terms pulled from the intention and the concepts they map to."""

    key_terms: tuple[str, ...]
    concepts: frozenset[ConceptId]
    backend: MatcherBackend


_PUNCT = re.compile(r"[^a-z0-9\s]+")


def normalize_text(text: str) -> str:
    """Lowercase, strip punctuation, and naively singularize every word
    (drop one trailing 's'). Applied once per intention; not idempotent
    for words ending in a double 's', so never re-apply."""
    lowered = _PUNCT.sub(" ", text.lower())
    words = []
    for word in lowered.split():
        if len(word) > 1 and word.endswith("s"):
            word = word[:-1]
        words.append(word)
    return " ".join(words)


def _phrase_present(phrase: str, padded_text: str) -> bool:
    return f" {phrase} " in padded_text


def lexicon_match(
    text: str, dictionary: ConceptDictionary = DICTIONARY
) -> frozenset[ConceptId]:
    """Deterministic trigger matching over pre-normalized text.

    `text` must already be normalized via :func:`normalize_text`. A concept
    matches when any of its trigger patterns is satisfied; a pattern is a
    conjunction of slots and a slot is satisfied by any of its phrases
    occurring as whole words.
    """
    padded = f" {text} "
    matched = set()
    for entry in dictionary:
        for pattern in entry.lexicon:
            if all(any(_phrase_present(p, padded) for p in slot) for slot in pattern):
                matched.add(entry.id)
                break
    return frozenset(matched)


def _lexicon_key_terms(text: str, dictionary: ConceptDictionary) -> tuple[str, ...]:
    """The trigger phrases that actually fired, in text order."""
    padded = f" {text} "
    phrases = {p for entry in dictionary for pattern in entry.lexicon for slot in pattern for p in slot}
    hits = [(padded.index(f" {p} "), p) for p in phrases if _phrase_present(p, padded)]
    return tuple(p for _, p in sorted(hits))


def build_llm_prompt(intention: Intention, dictionary: ConceptDictionary = DICTIONARY) -> str:
    """A byte-stable prompt: the intention verbatim, the full dictionary,
    and an instruction to answer with a JSON array of concept ids only."""
    lines = [
        "You map a teacher's intention onto a fixed dictionary of concepts a robot can learn.",
        "",
        "Concepts:",
    ]
    for entry in dictionary:
        lines.append(f"- {entry.id.value}: {entry.description}")
    lines += [
        "",
        "Teacher intention:",
        intention.text,
        "",
        "Identify the key terms in the intention and decide which concepts they match.",
        'Respond with only a JSON array of matched concept ids, for example ["unique-colors"].',
        "Respond with [] if nothing matches.",
    ]
    return "\n".join(lines)


_ARRAY = re.compile(r"\[[^\[\]]*\]", re.DOTALL)


def parse_llm_response(
    raw: str, dictionary: ConceptDictionary = DICTIONARY
) -> frozenset[ConceptId]:
    """Extract the first JSON array from a model response.

    Unknown ids are dropped with a warning; duplicates collapse. Raises
    MalformedBackendResponse when no array can be found or parsed.
    """
    for candidate in _ARRAY.finditer(raw):
        try:
            items = json.loads(candidate.group(0))
        except json.JSONDecodeError:
            continue
        concepts = set()
        for item in items:
            try:
                concepts.add(ConceptId(item))
            except ValueError:
                logger.warning("dropping unknown concept id from backend: %r", item)
        return frozenset(c for c in concepts if c in dictionary)
    raise MalformedBackendResponse(f"no concept array in response: {raw[:200]!r}")


class _TokenBucket:
    """Minimal thread-safe rate limiter; disabled when rate is None."""

    def __init__(self, per_second: float | None):
        self._rate = per_second
        self._lock = threading.Lock()
        self._allowance = per_second or 0.0
        self._last = time.monotonic()

    def acquire(self) -> None:
        if self._rate is None:
            return
        while True:
            with self._lock:
                now = time.monotonic()
                self._allowance = min(
                    self._rate, self._allowance + (now - self._last) * self._rate
                )
                self._last = now
                if self._allowance >= 1.0:
                    self._allowance -= 1.0
                    return
                wait = (1.0 - self._allowance) / self._rate
            time.sleep(wait)


ENV_URL = "SUPERDOKU_LLM_URL"
ENV_MODEL = "SUPERDOKU_LLM_MODEL"
ENV_API_KEY = "SUPERDOKU_LLM_API_KEY"


class LlmMatcher:
    """Client for a chat-completion-style JSON endpoint.

    Configuration comes from the environment unless passed explicitly.
    Temperature is pinned to 0. Transport failures are retried a bounded
    number of times and then surface as BackendUnavailable; an unusable
    body surfaces as MalformedBackendResponse. Neither is ever silently
    turned into an empty match.
    """

    def __init__(
        self,
        url: str | None = None,
        model: str | None = None,
        api_key: str | None = None,
        *,
        retries: int = 2,
        timeout: float = 10.0,
        requests_per_second: float | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.url = url or os.environ.get(ENV_URL, "")
        self.model = model or os.environ.get(ENV_MODEL, "")
        self.api_key = api_key or os.environ.get(ENV_API_KEY, "")
        self.retries = retries
        self.timeout = timeout
        self._bucket = _TokenBucket(requests_per_second)
        self._transport = transport
        if not self.url:
            raise BackendUnavailable(f"no LLM endpoint configured ({ENV_URL} unset)")

    def match(
        self, intention: Intention, dictionary: ConceptDictionary = DICTIONARY
    ) -> MatchResult:
        prompt = build_llm_prompt(intention, dictionary)
        body = {
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": prompt}],
        }
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            self._bucket.acquire()
            try:
                with httpx.Client(transport=self._transport, timeout=self.timeout) as client:
                    response = client.post(self.url, json=body, headers=headers)
                    response.raise_for_status()
                    payload = response.json()
                break
            except (httpx.HTTPError, json.JSONDecodeError) as exc:
                last_error = exc
        else:
            raise BackendUnavailable(f"LLM endpoint failed after retries: {last_error}")
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedBackendResponse(f"unexpected response shape: {payload!r}") from exc
        concepts = parse_llm_response(content, dictionary)
        return MatchResult(
            key_terms=tuple(dictionary.sorted(concepts)),
            concepts=concepts,
            backend=MatcherBackend.LLM,
        )


def match_intention(
    intention: Intention,
    dictionary: ConceptDictionary = DICTIONARY,
    backend: MatcherBackend = MatcherBackend.LEXICON,
    *,
    llm: LlmMatcher | None = None,
) -> MatchResult:
    """Map an intention to key terms and dictionary concepts.

    The lexicon backend is pure and deterministic. The LLM backend needs a
    configured client; its output is filtered to valid dictionary ids.
    """
    if backend is MatcherBackend.LEXICON:
        normalized = normalize_text(intention.text)
        concepts = lexicon_match(normalized, dictionary)
        return MatchResult(
            key_terms=_lexicon_key_terms(normalized, dictionary),
            concepts=concepts,
            backend=MatcherBackend.LEXICON,
        )
    client = llm if llm is not None else LlmMatcher()
    return client.match(intention, dictionary)
