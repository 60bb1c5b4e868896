"""Sentences as POS-tagged token sequences.

Sentences enter the pipeline either pre-tagged (``surface_TAG`` units, one
sentence per line) or as raw text run through a pluggable tagger.  The bundled
fallback tagger is a closed-vocabulary plus suffix-heuristic tagger: POS
quality is not the point of this package, and any external tagger's output can
be ingested through the pre-tagged format instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Union

__all__ = [
    "PENN_TAGS",
    "PosTextError",
    "PosToken",
    "PosSentence",
    "ingest_pretagged",
    "format_pretagged",
    "tokenize",
    "RuleTagger",
    "tag_raw",
]

# Penn Treebank tag set, word tags plus punctuation tags.
PENN_TAGS = frozenset(
    {
        "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
        "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
        "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
        "VBZ", "WDT", "WP", "WP$", "WRB",
        ".", ",", ":", "(", ")", "``", "''", "$", "#", "-LRB-", "-RRB-",
    }
)


class PosTextError(ValueError):
    """Raised for malformed pre-tagged input or tagger failures."""


@dataclass(frozen=True)
class PosToken:
    """One token: surface form plus Penn Treebank POS tag."""

    surface: str
    pos: str

    def __post_init__(self) -> None:
        if not self.surface:
            raise PosTextError("token surface must be non-empty")
        if self.pos not in PENN_TAGS:
            raise PosTextError(f"unknown POS tag {self.pos!r} on token {self.surface!r}")


@dataclass(frozen=True)
class PosSentence:
    """An ordered, immutable sequence of PosTokens.

    ``raw`` keeps the original text for provenance and is excluded from
    equality so that pre-tagged round trips compare equal.
    """

    tokens: tuple
    raw: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.tokens:
            raise PosTextError("empty sentence")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[PosToken]:
        return iter(self.tokens)

    @property
    def surfaces(self) -> tuple:
        return tuple(t.surface for t in self.tokens)

    @property
    def pos_tags(self) -> tuple:
        return tuple(t.pos for t in self.tokens)


def ingest_pretagged(line: str) -> PosSentence:
    """Parse one ``surface_TAG surface_TAG ...`` line into a PosSentence."""
    units = line.split()
    if not units:
        raise PosTextError("empty sentence")
    tokens: List[PosToken] = []
    for i, unit in enumerate(units, start=1):
        if "_" not in unit:
            raise PosTextError(f"token {i} {unit!r}: missing '_' separator")
        surface, _, tag = unit.rpartition("_")
        if not surface:
            raise PosTextError(f"token {i} {unit!r}: empty surface")
        if tag not in PENN_TAGS:
            raise PosTextError(f"token {i} {unit!r}: unknown POS tag {tag!r}")
        tokens.append(PosToken(surface, tag))
    return PosSentence(tuple(tokens), raw=" ".join(t.surface for t in tokens))


def format_pretagged(sentence: PosSentence) -> str:
    """Inverse of ingest_pretagged."""
    return " ".join(f"{t.surface}_{t.pos}" for t in sentence.tokens)


_OPENERS = "([{\"'`“‘«"
_CLOSERS = ".,;:!?)]}\"'%»”’"


def _split_unit(unit: str) -> List[str]:
    lead: List[str] = []
    while len(unit) > 1 and unit[0] in _OPENERS:
        lead.append(unit[0])
        unit = unit[1:]
    trail: List[str] = []
    while len(unit) > 1 and unit[-1] in _CLOSERS:
        trail.append(unit[-1])
        unit = unit[:-1]
    core = [unit]
    if len(unit) > 2 and unit[-2:].lower() in ("'s", "’s"):
        core = [unit[:-2], unit[-2:]]
    return lead + core + list(reversed(trail))


def tokenize(text: str) -> List[str]:
    """Whitespace tokenization that splits off punctuation, %, and possessive 's.

    Lossless: concatenating the tokens reproduces the input minus whitespace.
    """
    out: List[str] = []
    for unit in text.split():
        out.extend(tok for tok in _split_unit(unit) if tok)
    return out


_PUNCT_TAGS = {
    ".": ".", "!": ".", "?": ".",
    ",": ",",
    ":": ":", ";": ":", "-": ":", "--": ":", "...": ":",
    "(": "(", "[": "(", "{": "(",
    ")": ")", "]": ")", "}": ")",
    '"': "''", "'": "''", "`": "``", "“": "``", "”": "''", "‘": "``", "’": "''",
    "$": "$", "€": "$", "£": "$",
    "#": "#",
    "%": "NN",
}

_CLOSED_VOCAB = {
    # determiners / prepositions / conjunctions
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "these": "DT", "those": "DT", "each": "DT", "any": "DT", "some": "DT",
    "no": "DT", "all": "DT", "both": "DT",
    "of": "IN", "in": "IN", "for": "IN", "on": "IN", "by": "IN", "from": "IN",
    "with": "IN", "at": "IN", "as": "IN", "into": "IN", "during": "IN",
    "after": "IN", "before": "IN", "against": "IN", "between": "IN",
    "under": "IN", "over": "IN", "about": "IN", "than": "IN", "versus": "IN",
    "despite": "IN", "per": "IN", "amid": "IN", "through": "IN",
    "within": "IN", "without": "IN", "toward": "IN", "towards": "IN",
    "since": "IN", "until": "IN", "while": "IN", "because": "IN", "if": "IN",
    "although": "IN", "whether": "IN",
    "to": "TO",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC",
    # pronouns
    "it": "PRP", "he": "PRP", "she": "PRP", "they": "PRP", "we": "PRP",
    "i": "PRP", "you": "PRP", "him": "PRP", "them": "PRP", "us": "PRP",
    "her": "PRP",
    "its": "PRP$", "his": "PRP$", "their": "PRP$", "our": "PRP$",
    "your": "PRP$", "my": "PRP$",
    "there": "EX",
    "which": "WDT", "who": "WP", "what": "WP", "when": "WRB", "where": "WRB",
    "how": "WRB", "why": "WRB",
    # modals / auxiliaries / frequent verbs
    "will": "MD", "would": "MD", "can": "MD", "could": "MD", "may": "MD",
    "might": "MD", "shall": "MD", "should": "MD", "must": "MD",
    "is": "VBZ", "has": "VBZ", "does": "VBZ",
    "are": "VBP", "have": "VBP", "do": "VBP",
    "was": "VBD", "were": "VBD", "had": "VBD", "did": "VBD", "said": "VBD",
    "made": "VBD", "took": "VBD", "went": "VBD", "became": "VBD",
    "rose": "VBD", "grew": "VBD", "slid": "VBD", "sank": "VBD",
    "shrank": "VBD", "fell": "VBD", "won": "VBD",
    "be": "VB", "make": "VB", "buy": "VB", "sell": "VB", "build": "VB",
    "cut": "VB",
    "been": "VBN", "done": "VBN", "compared": "VBN", "based": "VBN",
    "expects": "VBZ", "says": "VBZ", "intends": "VBZ", "aims": "VBZ",
    "remains": "VBZ", "continues": "VBZ", "owns": "VBZ", "employs": "VBZ",
    "expect": "VBP", "remain": "VBP", "aim": "VBP", "continue": "VBP",
    # adverbs / comparatives
    "not": "RB", "also": "RB", "however": "RB", "only": "RB",
    "already": "RB", "currently": "RB", "respectively": "RB", "well": "RB",
    "very": "RB", "too": "RB", "so": "RB", "now": "RB", "here": "RB",
    "up": "RB", "down": "RB", "later": "RB", "again": "RB", "still": "RB",
    "earlier": "RBR", "more": "JJR", "less": "JJR", "most": "JJS",
    "least": "JJS", "higher": "JJR", "lower": "JJR", "stronger": "JJR",
    "weaker": "JJR", "better": "JJR", "worse": "JJR",
    # frequent adjectives and noun-modifiers in financial text
    "new": "JJ", "first": "JJ", "second": "JJ", "third": "JJ", "fourth": "JJ",
    "last": "JJ", "next": "JJ", "financial": "JJ", "net": "JJ", "gross": "JJ",
    "total": "JJ", "annual": "JJ", "previous": "JJ", "same": "JJ",
    "high": "JJ", "low": "JJ", "comparable": "JJ", "corresponding": "JJ",
    "short-term": "JJ", "long-term": "JJ", "due": "JJ", "unit": "NN",
    "operating": "NN", "year-on-year": "JJ",
    # numbers written out
    "million": "CD", "billion": "CD", "thousand": "CD", "mn": "CD",
    "bn": "CD", "meur": "CD",
    "percent": "NN", "pct": "NN", "euro": "NN", "euros": "NN",
}


def _is_number(tok: str) -> bool:
    if tok[0].isdigit():
        return True
    return len(tok) > 1 and tok[0] in "+-" and tok[1].isdigit()


class RuleTagger:
    """Closed-vocabulary + suffix-heuristic POS tagger.

    Deterministic and dependency-free; adequate for the chunk grammars this
    package ships.  Pass ``extra_vocab`` to pin tags for additional words.
    """

    def __init__(self, extra_vocab: Optional[dict] = None) -> None:
        self.vocab = dict(_CLOSED_VOCAB)
        if extra_vocab:
            self.vocab.update({k.lower(): v for k, v in extra_vocab.items()})

    def tag(self, tokens: Sequence[str]) -> List[str]:
        tags: List[str] = []
        for i, tok in enumerate(tokens):
            tags.append(self._tag_one(tok, i, tags))
        return tags

    def _tag_one(self, tok: str, i: int, tags: List[str]) -> str:
        if tok in _PUNCT_TAGS:
            return _PUNCT_TAGS[tok]
        if tok in ("'s", "’s"):
            return "POS"
        if _is_number(tok):
            return "CD"
        lower = tok.lower()
        if lower in self.vocab:
            return self.vocab[lower]
        if i > 0 and tok[0].isupper():
            return "NNP"
        if tags and tags[-1] in ("TO", "MD") and tok.isalpha():
            return "VB"
        if lower.endswith("ly"):
            return "RB"
        if lower.endswith("ing") and len(lower) > 4:
            return "VBG"
        if lower.endswith("ed") and len(lower) > 3:
            return "VBD"
        if lower.endswith("s") and not lower.endswith(("ss", "us", "is")) and len(lower) > 2:
            return "NNS"
        return "NN"


_DEFAULT_TAGGER: Optional[RuleTagger] = None


def _default_tagger() -> RuleTagger:
    global _DEFAULT_TAGGER
    if _DEFAULT_TAGGER is None:
        _DEFAULT_TAGGER = RuleTagger()
    return _DEFAULT_TAGGER


TaggerLike = Union[RuleTagger, Callable[[Sequence[str]], Sequence[str]]]


def tag_raw(text: str, tagger: Optional[TaggerLike] = None) -> PosSentence:
    """Tokenize raw text and tag it with the given (or bundled) tagger."""
    if not text or not text.strip():
        raise PosTextError("empty sentence")
    tokens = tokenize(text)
    tag_fn = tagger.tag if hasattr(tagger, "tag") else tagger
    if tag_fn is None:
        tag_fn = _default_tagger().tag
    try:
        tags = list(tag_fn(tokens))
    except PosTextError:
        raise
    except Exception as exc:  # a broken pluggable tagger is a caller error
        raise PosTextError(f"tagger unavailable or failed: {exc}") from exc
    if len(tags) != len(tokens):
        raise PosTextError("tagger returned wrong number of tags")
    return PosSentence(
        tuple(PosToken(s, t) for s, t in zip(tokens, tags)),
        raw=text,
    )
