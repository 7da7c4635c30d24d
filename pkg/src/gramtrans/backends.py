"""Translation backends: a deterministic translation memory and an HTTP client.

Backends receive marker-tagged text and return target-language text. Marker
preservation is not part of the contract; the transfer engine treats
dropped or corrupted markers as reported losses.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Protocol

import requests

from .grammar import Locale
from .markers import check_balanced


class BackendError(Exception):
    pass


class MissingEntry(BackendError):
    def __init__(self, source: str):
        super().__init__(f"translation memory has no entry for: {source!r}")
        self.source = source


class Unavailable(BackendError):
    pass


class BadResponse(BackendError):
    def __init__(self, detail: str, status: Optional[int] = None):
        super().__init__(detail)
        self.status = status


@dataclass(frozen=True)
class TranslationRequest:
    source_locale: Locale
    target_locale: Locale
    tagged_text: str

    def __post_init__(self):
        if self.source_locale.code == self.target_locale.code:
            raise ValueError("source and target locale must differ")
        if not check_balanced(self.tagged_text):
            raise ValueError("request text has unbalanced unit markers")


class TranslationBackend(Protocol):
    def translate(self, request: TranslationRequest) -> str:
        ...


_WS_RUN = re.compile(r"\s+")
_SPACE_BEFORE_PUNCT = re.compile(r" +(?=[.,;:!?])")


def normalize_tm_key(text: str) -> str:
    """Whitespace-normalized lookup key: collapse runs, drop spaces that
    directly precede sentence punctuation."""
    collapsed = _WS_RUN.sub(" ", text).strip()
    return _SPACE_BEFORE_PUNCT.sub("", collapsed)


class TranslationMemory:
    """Exact-lookup (source locale, target locale, text) -> target text."""

    def __init__(self, entries: Iterable[Mapping[str, str]] = ()):
        self._table: dict[tuple[str, str, str], str] = {}
        for entry in entries:
            self.add(
                entry["source_locale"], entry["target_locale"],
                entry["source"], entry["target"],
            )

    def add(self, source_locale: str, target_locale: str,
            source: str, target: str) -> None:
        if not check_balanced(source) or not check_balanced(target):
            raise ValueError("translation memory entries must be marker-balanced")
        key = (source_locale, target_locale, normalize_tm_key(source))
        self._table[key] = target

    def lookup(self, source_locale: str, target_locale: str, text: str) -> str:
        key = (source_locale, target_locale, normalize_tm_key(text))
        try:
            return self._table[key]
        except KeyError:
            raise MissingEntry(text) from None

    def __len__(self) -> int:
        return len(self._table)

    @classmethod
    def from_file(cls, path: str | Path) -> "TranslationMemory":
        with open(path, encoding="utf-8") as fh:
            entries = json.load(fh)
        return cls(entries)


class TMBackend:
    """Deterministic backend over an immutable translation memory."""

    def __init__(self, memory: TranslationMemory):
        self.memory = memory

    def translate(self, request: TranslationRequest) -> str:
        return self.memory.lookup(
            request.source_locale.code,
            request.target_locale.code,
            request.tagged_text,
        )


class HTTPBackend:
    """Minimal JSON-over-HTTP client: POST /translate with bounded retries.

    Request body: {"source": "...", "target": "...", "text": "..."};
    response body: {"text": "..."}. The request text is sent verbatim.
    """

    def __init__(self, url: str, timeout: float = 10.0, retries: int = 2,
                 backoff: float = 0.2):
        self.url = url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    def translate(self, request: TranslationRequest) -> str:
        payload = {
            "source": request.source_locale.code,
            "target": request.target_locale.code,
            "text": request.tagged_text,
        }
        last_error: Optional[Exception] = None
        for attempt in range(self.retries + 1):
            try:
                response = requests.post(
                    f"{self.url}/translate", json=payload, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (attempt + 1))
                continue
            if response.status_code >= 500:
                last_error = BadResponse(
                    f"server error {response.status_code}", response.status_code
                )
                if attempt < self.retries:
                    time.sleep(self.backoff * (attempt + 1))
                continue
            if response.status_code != 200:
                raise BadResponse(
                    f"unexpected status {response.status_code}", response.status_code
                )
            try:
                body = response.json()
                return body["text"]
            except (ValueError, KeyError) as exc:
                raise BadResponse(f"malformed response body: {exc}",
                                  response.status_code) from exc
        raise Unavailable(f"backend unreachable after {self.retries + 1} attempts: "
                          f"{last_error}")


def backend_from_config(config: Mapping, base_dir: Optional[Path] = None,
                        url_override: Optional[str] = None) -> TranslationBackend:
    """Build a backend from a config mapping ({"kind": "tm"|"http", ...})."""
    kind = config.get("kind")
    if kind == "tm":
        path = Path(config["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return TMBackend(TranslationMemory.from_file(path))
    if kind == "http":
        return HTTPBackend(
            url=url_override or config["url"],
            timeout=float(config.get("timeout_s", 10.0)),
            retries=int(config.get("retries", 2)),
        )
    raise ValueError(f"unknown backend kind: {kind!r}")
