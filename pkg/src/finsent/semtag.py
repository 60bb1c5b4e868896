"""Semantic tagging: chunked sentences plus lexicon into the 10-tag vocabulary.

Tags are the six lexicon categories plus four interaction tags pairing an
indicator with a direction (``LagInd::UP`` and friends).  A sentence's tag set
is built in four passes:

1. indicator/modifier pairs from the pairing grammar become interaction tags
   (each chunk span participates in at most one interaction);
2. if no interaction was found and the sentence contains a comparison marker,
   numeric directionality is derived from the numeric grammar's match;
3. remaining indicator/direction words anywhere in the sentence contribute
   bare tags (spans consumed by an interaction are suppressed);
4. POS/NEG sentiment words are collected token-wise, independent of chunking.

Optional reversal post-processing flips the direction of interaction tags
whose indicator is on the reversal list (costs, expenses, ...).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from .chunker import (
    Chunk,
    ChunkGrammar,
    INDICATOR_LABELS,
    PAIR_NODE_LABEL,
    Span,
    bundled_grammar,
    chunk,
    extract_pairs,
)
from .lexicon import (
    DIRECTION_CATEGORIES,
    INDICATOR_CATEGORIES,
    SENTIMENT_CATEGORIES,
    LexCategory,
    Lexicon,
)
from .pos_text import PosSentence

__all__ = [
    "SemTag",
    "TaggedSentence",
    "Mode",
    "COMPARISON_MARKERS",
    "tag_sentence",
    "derive_numeric_direction",
    "filter_mode",
    "flip_direction",
    "canonical_order",
    "interaction_tag",
    "is_interaction",
]


class SemTag(str, Enum):
    """The ten semantic tags."""

    LAGIND = "LagInd"
    LEADIND = "LeadInd"
    UP = "UP"
    DOWN = "DOWN"
    POS = "POS"
    NEG = "NEG"
    LAGIND_UP = "LagInd::UP"
    LAGIND_DOWN = "LagInd::DOWN"
    LEADIND_UP = "LeadInd::UP"
    LEADIND_DOWN = "LeadInd::DOWN"


_TAG_ORDER = {tag: i for i, tag in enumerate(SemTag)}

_INTERACTION = {
    (LexCategory.LAGIND, LexCategory.UP): SemTag.LAGIND_UP,
    (LexCategory.LAGIND, LexCategory.DOWN): SemTag.LAGIND_DOWN,
    (LexCategory.LEADIND, LexCategory.UP): SemTag.LEADIND_UP,
    (LexCategory.LEADIND, LexCategory.DOWN): SemTag.LEADIND_DOWN,
}

_FLIP = {
    SemTag.LAGIND_UP: SemTag.LAGIND_DOWN,
    SemTag.LAGIND_DOWN: SemTag.LAGIND_UP,
    SemTag.LEADIND_UP: SemTag.LEADIND_DOWN,
    SemTag.LEADIND_DOWN: SemTag.LEADIND_UP,
}

_BARE = {category: SemTag(category.value) for category in LexCategory}


def interaction_tag(indicator: LexCategory, direction: LexCategory) -> SemTag:
    return _INTERACTION[(indicator, direction)]


def is_interaction(tag: SemTag) -> bool:
    return tag in _FLIP


def flip_direction(tag: SemTag) -> SemTag:
    """UP <-> DOWN on interaction tags; other tags pass through unchanged."""
    return _FLIP.get(tag, tag)


def canonical_order(tags: Iterable[SemTag]) -> List[SemTag]:
    """Tags sorted in declaration order (bare tags first, then interactions)."""
    return sorted(tags, key=_TAG_ORDER.__getitem__)


@dataclass(frozen=True)
class TaggedSentence:
    """The semantic tag set extracted from one sentence."""

    tags: frozenset
    source: PosSentence

    def __contains__(self, tag: SemTag) -> bool:
        return tag in self.tags


class Mode(str, Enum):
    """Which tag families the classifier sees."""

    LAG_ONLY = "lag"
    LAG_LEAD = "lag-lead"
    ALL = "all"


_MODE_KEEP = {
    Mode.LAG_ONLY: frozenset(
        {SemTag.LAGIND, SemTag.LAGIND_UP, SemTag.LAGIND_DOWN, SemTag.UP, SemTag.DOWN}
    ),
    Mode.LAG_LEAD: frozenset(
        {
            SemTag.LAGIND, SemTag.LAGIND_UP, SemTag.LAGIND_DOWN,
            SemTag.LEADIND, SemTag.LEADIND_UP, SemTag.LEADIND_DOWN,
            SemTag.UP, SemTag.DOWN,
        }
    ),
    Mode.ALL: frozenset(SemTag),
}


def filter_mode(tagged: TaggedSentence, mode: Mode) -> TaggedSentence:
    """Restrict a tag set to the families the given mode keeps."""
    keep = _MODE_KEEP[Mode(mode)]
    return TaggedSentence(frozenset(t for t in tagged.tags if t in keep), tagged.source)


COMPARISON_MARKERS = ("down from", "up from", "compared to", "versus")

_NUMBER_RE = re.compile(r"[+-]?\d+(?:[.,]\d+)*")


@dataclass(frozen=True)
class _Hit:
    """A lexicon match inside the sentence: category, phrase, token positions."""

    category: LexCategory
    phrase: str
    positions: frozenset


def _find_in_span(lex: Lexicon, surfaces: Sequence[str], span: Span, categories) -> Optional[_Hit]:
    """Longest (then leftmost) sub-phrase of the span in the given categories."""
    length = len(span.tokens)
    for n in range(min(length, lex.max_phrase_len), 0, -1):
        for off in range(0, length - n + 1):
            start = span.start + off
            phrase = surfaces[start : start + n]
            category = lex.lookup(phrase)
            if category is not None and category in categories:
                return _Hit(category, " ".join(phrase).lower(), frozenset(range(start, start + n)))
    return None


def _scan(lex: Lexicon, surfaces: Sequence[str], categories) -> Iterable[_Hit]:
    """Longest-match, non-overlapping, left-to-right lexicon scan."""
    i, n = 0, len(surfaces)
    max_len = lex.max_phrase_len
    while i < n:
        for length in range(min(max_len, n - i), 0, -1):
            phrase = surfaces[i : i + length]
            category = lex.lookup(phrase)
            if category is not None and category in categories:
                yield _Hit(category, " ".join(phrase).lower(), frozenset(range(i, i + length)))
                i += length
                break
        else:
            i += 1


def _marker_in(surfaces: Sequence[str]) -> Optional[str]:
    joined = " " + " ".join(s.lower() for s in surfaces) + " "
    for marker in COMPARISON_MARKERS:
        if f" {marker} " in joined:
            return marker
    return None


def _parse_value(surface: str) -> Optional[float]:
    m = _NUMBER_RE.match(surface)
    if not m:
        return None
    return float(m.group(0).replace(",", ""))


def _numeric_hit(sentence: PosSentence, tree: Chunk, lex: Lexicon) -> Optional[Tuple[SemTag, _Hit]]:
    surfaces = sentence.surfaces
    marker = _marker_in(surfaces)
    nodes = [tree] if tree.label == PAIR_NODE_LABEL else []
    nodes.extend(n for n in tree.subchunks() if n.label == PAIR_NODE_LABEL)
    for node in nodes:
        indicator = None
        for sub in node.subchunks():
            if sub.label in INDICATOR_LABELS:
                span = Span(sub.label, sub.start, sub.surfaces())
                indicator = _find_in_span(lex, surfaces, span, INDICATOR_CATEGORIES)
                if indicator is not None:
                    break
        if indicator is None:
            continue
        values = []
        for sub in node.subchunks():
            if sub.label == "CD":
                value = _parse_value(sub.surfaces()[0])
                if value is not None:
                    values.append(value)
        if len(values) < 2:
            continue
        current, reference = values[0], values[1]
        if marker == "down from":
            direction = LexCategory.DOWN
        elif marker == "up from":
            direction = LexCategory.UP
        elif current > reference:
            direction = LexCategory.UP
        elif current < reference:
            direction = LexCategory.DOWN
        else:
            continue
        return interaction_tag(indicator.category, direction), indicator
    return None


def derive_numeric_direction(
    sentence: PosSentence, tree: Chunk, lex: Lexicon
) -> Optional[SemTag]:
    """Interaction tag derived from an indicator and two compared numbers.

    ``tree`` must come from the numeric grammar.  The first value is the
    current figure and the second the reference: higher means UP, lower DOWN,
    equal values produce nothing.  "down from"/"up from" markers state the
    direction outright.  Missing values or indicators yield None.
    """
    found = _numeric_hit(sentence, tree, lex)
    return found[0] if found else None


def tag_sentence(
    sentence: PosSentence,
    lex: Lexicon,
    pair_grammar: Optional[ChunkGrammar] = None,
    numeric_grammar: Optional[ChunkGrammar] = None,
    reversal: bool = False,
) -> TaggedSentence:
    """Extract the semantic tag set of one sentence (see module docstring)."""
    pair_grammar = pair_grammar or bundled_grammar("indicator_direction")
    numeric_grammar = numeric_grammar or bundled_grammar("numeric_direction")
    surfaces = sentence.surfaces

    tree = chunk(pair_grammar, sentence)
    extraction = extract_pairs(tree)

    interactions: List[Tuple[SemTag, _Hit]] = []
    consumed: Set[int] = set()
    used_spans: Set[Span] = set()
    for ind_span, mod_span in extraction.pairs:
        if ind_span in used_spans or mod_span in used_spans:
            continue
        ind_hit = _find_in_span(lex, surfaces, ind_span, INDICATOR_CATEGORIES)
        if ind_hit is None:
            continue
        mod_hit = _find_in_span(lex, surfaces, mod_span, DIRECTION_CATEGORIES)
        if mod_hit is None:
            continue
        interactions.append((interaction_tag(ind_hit.category, mod_hit.category), ind_hit))
        consumed |= ind_hit.positions | mod_hit.positions
        used_spans.add(ind_span)
        used_spans.add(mod_span)

    if not interactions and _marker_in(surfaces):
        found = _numeric_hit(sentence, chunk(numeric_grammar, sentence), lex)
        if found is not None:
            tag, ind_hit = found
            interactions.append((tag, ind_hit))
            consumed |= ind_hit.positions

    tags: Set[SemTag] = set()
    for hit in _scan(lex, surfaces, INDICATOR_CATEGORIES | DIRECTION_CATEGORIES):
        if hit.positions & consumed:
            continue
        tags.add(_BARE[hit.category])
    for hit in _scan(lex, surfaces, SENTIMENT_CATEGORIES):
        tags.add(_BARE[hit.category])

    for tag, ind_hit in interactions:
        if reversal and lex.is_reversal(ind_hit.phrase):
            tag = flip_direction(tag)
        tags.add(tag)

    return TaggedSentence(frozenset(tags), sentence)
