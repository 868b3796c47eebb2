"""Grounded-caption parsing: text with interleaved box groups.

A grounded caption looks like ``"Two elephants [0.10, 0.20, 0.50, 0.90] are
in a field"``. Parsing removes every bracketed group from the text and, for
each well-formed group, attaches it to the noun-phrase-ish run of words
immediately before it. Malformed groups (wrong arity, junk coordinates) are
still removed from the plain text so downstream metrics never see
coordinate debris, but they produce no mention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BoxParseError
from .geometry import BoxGroup, parse_group

# Longest run of words a box group may claim as its phrase.
MAX_PHRASE_TOKENS = 6

# First '[' through first ']'. Nested or stray brackets degrade to junk
# groups rather than derailing the scan.
_GROUP_RE = re.compile(r"\[[^\]]*\]")

_TOKEN_RE = re.compile(r"\S+")

_SENTENCE_PUNCT = ".,;:!?"


@dataclass(frozen=True)
class Mention:
    """A phrase span into the plain caption plus the boxes grounded to it."""

    start: int
    end: int
    boxes: BoxGroup

    def text(self, plain: str) -> str:
        return plain[self.start : self.end]


@dataclass(frozen=True)
class GroundedCaption:
    raw: str
    plain: str
    mentions: tuple[Mention, ...] = field(default_factory=tuple)
    malformed_groups: int = 0
    unattached_groups: int = 0

    @property
    def phrases(self) -> list[str]:
        return [m.text(self.plain) for m in self.mentions]


def _is_boundary_token(token: str) -> bool:
    if all(not ch.isalnum() for ch in token):
        return True
    return token[-1] in _SENTENCE_PUNCT


def parse_grounded(raw: str) -> GroundedCaption:
    """Split a raw caption into plain text and grounded mentions.

    Never raises: box-free text yields zero mentions, malformed groups are
    dropped (and counted).
    """
    segments: list[str] = []
    groups: list[BoxGroup | None] = []  # None marks a malformed group
    pos = 0
    for m in _GROUP_RE.finditer(raw):
        segments.append(raw[pos : m.start()])
        try:
            groups.append(parse_group(m.group(0)))
        except BoxParseError:
            groups.append(None)
        pos = m.end()
    segments.append(raw[pos:])

    # Rebuild the plain text with whitespace collapsed, remembering where
    # each group sat (as an index into the normalized plain string).
    plain_chars: list[str] = []
    anchors: list[int] = []

    def _append(text: str):
        for ch in text:
            if ch.isspace():
                if plain_chars and plain_chars[-1] != " ":
                    plain_chars.append(" ")
            else:
                plain_chars.append(ch)

    for i, segment in enumerate(segments):
        _append(segment)
        if i < len(groups):
            anchors.append(len(plain_chars))

    # _append never emits a leading space, so only the tail can need trimming
    # and the recorded anchors stay valid after clamping.
    plain = "".join(plain_chars).rstrip()

    mentions: list[Mention] = []
    malformed = 0
    unattached = 0
    prev_limit = 0  # phrases never reach left of this index
    for anchor, group in zip(anchors, groups):
        anchor = min(anchor, len(plain))
        if group is None:
            malformed += 1
            prev_limit = max(prev_limit, anchor)
            continue
        tokens = [
            t for t in _TOKEN_RE.finditer(plain, prev_limit, anchor)
        ]
        run: list[re.Match] = []
        for tok in reversed(tokens):
            if _is_boundary_token(tok.group(0)):
                break
            run.append(tok)
            if len(run) == MAX_PHRASE_TOKENS:
                break
        if not run:
            unattached += 1
            prev_limit = max(prev_limit, anchor)
            continue
        run.reverse()
        mentions.append(Mention(run[0].start(), run[-1].end(), group))
        prev_limit = max(prev_limit, anchor)

    return GroundedCaption(
        raw=raw,
        plain=plain,
        mentions=tuple(mentions),
        malformed_groups=malformed,
        unattached_groups=unattached,
    )


def strip_boxes(raw: str) -> str:
    """Plain text of a grounded caption (idempotent)."""
    return parse_grounded(raw).plain


def has_box_group(raw: str) -> bool:
    """True if the text contains at least one well-formed box group."""
    for m in _GROUP_RE.finditer(raw):
        try:
            parse_group(m.group(0))
            return True
        except BoxParseError:
            continue
    return False


def word_count(plain: str) -> int:
    """Whitespace-delimited token count after trimming."""
    return len(plain.split())
