"""Polarity prediction from ordered rule bases.

``predict_flat`` scores a tag set against every rule: a rule whose antecedent
equals the complete tag set matches, otherwise single-item antecedents match
each tag individually.  Matched rules contribute their confidence to their
class; the class with the highest average confidence wins, with ties resolved
neutral, then negative, then positive.  With no match the default class is
returned.

Three arrangements are supported: a hierarchical classifier (stage one
separates neutral from polarized, stage two positive from negative), a flat
three-class rule base, and one-against-one pairwise voting.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .arm import (
    DEFAULT_MINCONF,
    DEFAULT_MINSUP,
    MiningError,
    Rule,
    RuleBase,
    Transaction,
    mine_rules,
    parse_rulebase,
    serialize_rulebase,
)

__all__ = [
    "POSITIVE",
    "NEUTRAL",
    "NEGATIVE",
    "POLARIZED",
    "CLASSES",
    "Arrangement",
    "MatchPolicy",
    "Scoring",
    "ClassScore",
    "ClassifierModel",
    "ModelFormatError",
    "score_tags",
    "predict_flat",
    "train",
    "predict",
    "save_model",
    "load_model",
]

POSITIVE = "positive"
NEUTRAL = "neutral"
NEGATIVE = "negative"
POLARIZED = "polarized"
CLASSES = (POSITIVE, NEUTRAL, NEGATIVE)

# Deterministic tie resolution between equal class scores.
TIE_ORDER = (NEUTRAL, NEGATIVE, POSITIVE, POLARIZED)


class ModelFormatError(ValueError):
    """Raised when a persisted model directory cannot be loaded."""


class Arrangement(str, Enum):
    HSC = "hsc"
    MULTICLASS = "multiclass"
    ONE_VS_ONE = "ovo"


class MatchPolicy(str, Enum):
    """How rule antecedents are matched against a tag set."""

    EXACT = "exact"  # full-set equality, else single-tag antecedents per tag
    SUBSET = "subset"  # antecedent is a subset of the tag set


class Scoring(str, Enum):
    AVERAGE = "average"  # confidence sum / match count
    SUM = "sum"


@dataclass(frozen=True)
class ClassScore:
    """Accumulated confidence per class: (sum, match count) pairs."""

    sums: Mapping[str, float]
    counts: Mapping[str, int]

    def value(self, cls: str, scoring: Scoring) -> float:
        if scoring is Scoring.SUM:
            return self.sums[cls]
        return self.sums[cls] / self.counts[cls]


def score_tags(
    tags: FrozenSet[str],
    rb: RuleBase,
    match_policy: MatchPolicy = MatchPolicy.EXACT,
) -> ClassScore:
    """Accumulate rule confidences per class for one tag set."""
    tags = frozenset(tags)
    sums: Dict[str, float] = {}
    counts: Dict[str, int] = {}

    def add(rule: Rule) -> None:
        sums[rule.consequent] = sums.get(rule.consequent, 0.0) + rule.confidence
        counts[rule.consequent] = counts.get(rule.consequent, 0) + 1

    for rule in rb.rules:
        if match_policy is MatchPolicy.SUBSET:
            if rule.antecedent <= tags:
                add(rule)
            continue
        if rule.antecedent == tags:
            add(rule)
        else:
            for tag in tags:
                if rule.antecedent == {tag}:
                    add(rule)
    return ClassScore(sums, counts)


def _pick(score: ClassScore, scoring: Scoring) -> Optional[str]:
    if not score.sums:
        return None
    order = {cls: i for i, cls in enumerate(TIE_ORDER)}

    def key(cls: str) -> tuple:
        return (-score.value(cls, scoring), order.get(cls, len(order)), cls)

    return min(score.sums, key=key)


def predict_flat(
    tags: FrozenSet[str],
    rb: RuleBase,
    default: str = NEUTRAL,
    match_policy: MatchPolicy = MatchPolicy.EXACT,
    scoring: Scoring = Scoring.AVERAGE,
) -> str:
    """Predict a class for one tag set against one rule base."""
    winner = _pick(score_tags(tags, rb, match_policy), Scoring(scoring))
    return winner if winner is not None else default


# ---------------------------------------------------------------------------
# classifier arrangements
# ---------------------------------------------------------------------------

STAGE_GATE = "gate"  # polarized vs neutral
STAGE_POLARITY = "polarity"  # positive vs negative
STAGE_MULTICLASS = "multiclass"


def _pair_stage(a: str, b: str) -> str:
    return "-".join(sorted((a, b)))


@dataclass(frozen=True)
class ClassifierModel:
    """Stage rule bases plus the prediction policy knobs."""

    arrangement: Arrangement
    stages: Mapping[str, RuleBase]
    minsup: float = DEFAULT_MINSUP
    minconf: float = DEFAULT_MINCONF
    default_class: str = NEUTRAL
    stage2_default: str = NEGATIVE
    match_policy: MatchPolicy = MatchPolicy.EXACT
    scoring: Scoring = Scoring.AVERAGE

    def rule_count(self) -> int:
        return sum(len(rb) for rb in self.stages.values())


def _warn_missing_classes(transactions: Sequence[Transaction], expected: Iterable[str]) -> None:
    present = {t.label for t in transactions}
    for cls in expected:
        if cls not in present:
            warnings.warn(
                f"class {cls!r} absent from training data; it cannot be predicted",
                stacklevel=3,
            )


def _mine_or_empty(
    transactions: Sequence[Transaction], minsup: float, minconf: float, classes, metadata
) -> RuleBase:
    if not transactions:
        return RuleBase((), minsup=minsup, minconf=minconf, metadata=metadata)
    return mine_rules(transactions, minsup, minconf, classes=classes, metadata=metadata)


def train(
    transactions: Sequence[Transaction],
    arrangement: Arrangement = Arrangement.HSC,
    minsup: float = DEFAULT_MINSUP,
    minconf: float = DEFAULT_MINCONF,
    match_policy: MatchPolicy = MatchPolicy.EXACT,
    scoring: Scoring = Scoring.AVERAGE,
    stage2_default: str = NEGATIVE,
) -> ClassifierModel:
    """Mine the stage rule bases for the chosen arrangement."""
    if not transactions:
        raise MiningError("cannot train on an empty transaction list")
    arrangement = Arrangement(arrangement)
    _warn_missing_classes(transactions, CLASSES)
    stages: Dict[str, RuleBase] = {}

    if arrangement is Arrangement.HSC:
        gate_transactions = [
            Transaction(t.items, NEUTRAL if t.label == NEUTRAL else POLARIZED)
            for t in transactions
        ]
        stages[STAGE_GATE] = _mine_or_empty(
            gate_transactions, minsup, minconf,
            classes={POLARIZED, NEUTRAL}, metadata=(("stage", STAGE_GATE),),
        )
        polarized = [t for t in transactions if t.label in (POSITIVE, NEGATIVE)]
        stages[STAGE_POLARITY] = _mine_or_empty(
            polarized, minsup, minconf,
            classes={POSITIVE, NEGATIVE}, metadata=(("stage", STAGE_POLARITY),),
        )
    elif arrangement is Arrangement.MULTICLASS:
        stages[STAGE_MULTICLASS] = _mine_or_empty(
            transactions, minsup, minconf,
            classes=set(CLASSES), metadata=(("stage", STAGE_MULTICLASS),),
        )
    else:
        for a, b in ((POSITIVE, NEUTRAL), (POSITIVE, NEGATIVE), (NEUTRAL, NEGATIVE)):
            subset = [t for t in transactions if t.label in (a, b)]
            stages[_pair_stage(a, b)] = _mine_or_empty(
                subset, minsup, minconf,
                classes={a, b}, metadata=(("stage", _pair_stage(a, b)),),
            )

    return ClassifierModel(
        arrangement=arrangement,
        stages=stages,
        minsup=minsup,
        minconf=minconf,
        stage2_default=stage2_default,
        match_policy=MatchPolicy(match_policy),
        scoring=Scoring(scoring),
    )


def predict(model: ClassifierModel, tags: FrozenSet[str]) -> str:
    """Predict positive / neutral / negative for one tag set."""
    tags = frozenset(tags)
    kwargs = dict(match_policy=model.match_policy, scoring=model.scoring)

    if model.arrangement is Arrangement.HSC:
        gate = predict_flat(tags, model.stages[STAGE_GATE], default=model.default_class, **kwargs)
        if gate != POLARIZED:
            return gate
        return predict_flat(
            tags, model.stages[STAGE_POLARITY], default=model.stage2_default, **kwargs
        )

    if model.arrangement is Arrangement.MULTICLASS:
        return predict_flat(tags, model.stages[STAGE_MULTICLASS], default=model.default_class, **kwargs)

    votes: Dict[str, int] = {}
    for a, b in ((POSITIVE, NEUTRAL), (POSITIVE, NEGATIVE), (NEUTRAL, NEGATIVE)):
        default = NEUTRAL if NEUTRAL in (a, b) else NEGATIVE
        vote = predict_flat(tags, model.stages[_pair_stage(a, b)], default=default, **kwargs)
        votes[vote] = votes.get(vote, 0) + 1
    order = {cls: i for i, cls in enumerate(TIE_ORDER)}
    return min(votes, key=lambda cls: (-votes[cls], order.get(cls, len(order))))


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

_MANIFEST = "manifest.json"


def save_model(model: ClassifierModel, directory: Union[str, Path], tagging: Optional[dict] = None) -> Path:
    """Write a model directory: manifest.json plus one rules file per stage."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stage_files = {}
    for stage, rb in model.stages.items():
        filename = f"{stage}.rules"
        (directory / filename).write_text(serialize_rulebase(rb), encoding="utf-8")
        stage_files[stage] = filename
    manifest = {
        "format": "finsent-model/1",
        "arrangement": model.arrangement.value,
        "minsup": model.minsup,
        "minconf": model.minconf,
        "default_class": model.default_class,
        "stage2_default": model.stage2_default,
        "match_policy": model.match_policy.value,
        "scoring": model.scoring.value,
        "stages": stage_files,
        "tagging": tagging or {},
    }
    (directory / _MANIFEST).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return directory


def load_model(directory: Union[str, Path]) -> Tuple[ClassifierModel, dict]:
    """Load a model directory; returns (model, manifest)."""
    directory = Path(directory)
    manifest_path = directory / _MANIFEST
    if not manifest_path.exists():
        raise ModelFormatError(f"{directory}: no {_MANIFEST}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{manifest_path}: invalid JSON: {exc}") from None
    if manifest.get("format") != "finsent-model/1":
        raise ModelFormatError(f"{manifest_path}: unsupported format {manifest.get('format')!r}")
    try:
        stages = {
            stage: parse_rulebase((directory / filename).read_text(encoding="utf-8"))
            for stage, filename in manifest["stages"].items()
        }
        model = ClassifierModel(
            arrangement=Arrangement(manifest["arrangement"]),
            stages=stages,
            minsup=float(manifest["minsup"]),
            minconf=float(manifest["minconf"]),
            default_class=manifest["default_class"],
            stage2_default=manifest["stage2_default"],
            match_policy=MatchPolicy(manifest["match_policy"]),
            scoring=Scoring(manifest["scoring"]),
        )
    except (KeyError, ValueError, OSError) as exc:
        raise ModelFormatError(f"{directory}: malformed model: {exc}") from None
    return model, manifest
