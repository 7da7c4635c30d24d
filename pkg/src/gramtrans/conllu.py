"""CoNLL-U interchange: dependency parses of translated snippets.

Only the ID, FORM, LEMMA, UPOS, FEATS, HEAD, and DEPREL columns are read.
Fragments are delimited by ``# unit_id = ...`` comments, one fragment per
snippet. Multiword-token ranges (``3-4``) and empty nodes (``3.1``) are
skipped, as is standard when consuming the format.

Parser contract for producing such files externally: the engine writes a
UTF-8 snippets file with one ``<unit_id>\\t<text>`` line per snippet, the
parser command is invoked as ``<command> <snippets-file> <locale-code>
<output-file>`` and must write the CoNLL-U fragments (with unit_id
comments) to the output file.
"""

from __future__ import annotations

import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Protocol, Sequence

from .grammar import Locale


class ConlluError(ValueError):
    pass


@dataclass(frozen=True)
class DependencyToken:
    index: int
    form: str
    lemma: str
    upos: str
    feats: Mapping[str, str] = field(default_factory=dict)
    head: int = 0
    deprel: str = "dep"


@dataclass(frozen=True)
class ParseFragment:
    unit_id: str
    tokens: tuple[DependencyToken, ...]
    locale: Locale

    def root(self) -> DependencyToken:
        roots = [t for t in self.tokens if t.head == 0]
        if len(roots) != 1:
            raise ConlluError(
                f"fragment {self.unit_id!r} has {len(roots)} roots, expected 1"
            )
        return roots[0]

    def children(self, token: DependencyToken) -> tuple[DependencyToken, ...]:
        return tuple(t for t in self.tokens if t.head == token.index)


def validate_fragment(frag: ParseFragment) -> None:
    """Check index contiguity and that the head graph is a tree."""
    count = len(frag.tokens)
    indices = [t.index for t in frag.tokens]
    if indices != list(range(1, count + 1)):
        raise ConlluError(f"fragment {frag.unit_id!r}: token ids not contiguous from 1")
    for tok in frag.tokens:
        if not 0 <= tok.head <= count:
            raise ConlluError(
                f"fragment {frag.unit_id!r}: head {tok.head} out of range"
            )
        if tok.head == tok.index:
            raise ConlluError(f"fragment {frag.unit_id!r}: token is its own head")
    frag.root()
    # Walking up from every token must reach the root without cycling.
    for tok in frag.tokens:
        seen = set()
        current = tok
        while current.head != 0:
            if current.index in seen:
                raise ConlluError(f"fragment {frag.unit_id!r}: head cycle")
            seen.add(current.index)
            current = frag.tokens[current.head - 1]


def _parse_feats(raw: str) -> dict[str, str]:
    if raw in ("_", ""):
        return {}
    feats = {}
    for item in raw.split("|"):
        key, sep, value = item.partition("=")
        if sep:
            feats[key] = value
    return feats


def parse_conllu(text: str, locale: Locale) -> list[ParseFragment]:
    """Parse CoNLL-U text into unit-labelled fragments."""
    fragments: list[ParseFragment] = []
    unit_id: Optional[str] = None
    tokens: list[DependencyToken] = []

    def flush():
        nonlocal tokens, unit_id
        if tokens:
            if unit_id is None:
                raise ConlluError("fragment without a '# unit_id =' comment")
            frag = ParseFragment(unit_id=unit_id, tokens=tuple(tokens), locale=locale)
            validate_fragment(frag)
            fragments.append(frag)
        tokens = []
        unit_id = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            key, sep, value = comment.partition("=")
            if sep and key.strip() == "unit_id":
                if tokens:
                    flush()
                unit_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) < 8:
            raise ConlluError(f"line {lineno}: expected 10 tab-separated columns")
        if "-" in cols[0] or "." in cols[0]:
            continue
        try:
            index = int(cols[0])
            head = int(cols[6]) if cols[6] != "_" else 0
        except ValueError:
            raise ConlluError(f"line {lineno}: bad ID or HEAD column") from None
        tokens.append(
            DependencyToken(
                index=index,
                form=cols[1],
                lemma=cols[2] if cols[2] != "_" else cols[1],
                upos=cols[3],
                feats=_parse_feats(cols[5]),
                head=head,
                deprel=cols[7],
            )
        )
    flush()
    return fragments


def load_fragments(path: str | Path, locale: Locale) -> dict[str, ParseFragment]:
    with open(path, encoding="utf-8") as fh:
        frags = parse_conllu(fh.read(), locale)
    out: dict[str, ParseFragment] = {}
    for frag in frags:
        if frag.unit_id in out:
            raise ConlluError(f"duplicate fragment for unit {frag.unit_id!r}")
        out[frag.unit_id] = frag
    return out


class ParseProvider(Protocol):
    """Source of dependency parses for translated snippets."""

    def parse_snippets(self, snippets: Sequence[tuple[str, str]],
                       locale: Locale) -> Mapping[str, ParseFragment]:
        ...


class FixtureParseProvider:
    """Serves pre-parsed fragments from a CoNLL-U file, keyed by unit id."""

    def __init__(self, fragments: Mapping[str, ParseFragment]):
        self._fragments = dict(fragments)

    @classmethod
    def from_file(cls, path: str | Path, locale: Locale) -> "FixtureParseProvider":
        return cls(load_fragments(path, locale))

    def parse_snippets(self, snippets: Sequence[tuple[str, str]],
                       locale: Locale) -> dict[str, ParseFragment]:
        return {
            unit_id: self._fragments[unit_id]
            for unit_id, _text in snippets
            if unit_id in self._fragments
        }


class SubprocessParseProvider:
    """Invokes an external parser process per the documented file contract."""

    def __init__(self, command: Sequence[str], timeout: float = 60.0):
        self.command = list(command)
        self.timeout = timeout

    def parse_snippets(self, snippets: Sequence[tuple[str, str]],
                       locale: Locale) -> dict[str, ParseFragment]:
        with tempfile.TemporaryDirectory(prefix="gramtrans-parse-") as tmp:
            snippets_path = Path(tmp) / "snippets.tsv"
            output_path = Path(tmp) / "parses.conllu"
            with open(snippets_path, "w", encoding="utf-8") as fh:
                for unit_id, text in snippets:
                    fh.write(f"{unit_id}\t{text}\n")
            subprocess.run(
                [*self.command, str(snippets_path), locale.code, str(output_path)],
                check=True,
                timeout=self.timeout,
            )
            return load_fragments(output_path, locale)
