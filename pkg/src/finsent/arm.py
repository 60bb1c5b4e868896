"""Apriori frequent-itemset mining and class association rule generation.

Transactions are tag sets with a class label; the label joins the itemset as
a distinguished item during mining.  Rules have the form ``antecedent -> c``
where the consequent is a single class item, qualified by support (joint
frequency over all transactions, in percent) and confidence.  A RuleBase is
totally ordered: confidence desc, support desc, antecedent length desc, then
antecedent and consequent ascending as determinism tie-breaks.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence

__all__ = [
    "MiningError",
    "RuleBaseFormatError",
    "Transaction",
    "Rule",
    "RuleBase",
    "mine_frequent",
    "generate_rules",
    "mine_rules",
    "serialize_rulebase",
    "parse_rulebase",
    "dump_transactions",
    "parse_transactions",
]

DEFAULT_MINSUP = 0.5
DEFAULT_MINCONF = 60.0


class MiningError(ValueError):
    """Raised for invalid mining inputs (empty data, bad thresholds)."""


class RuleBaseFormatError(ValueError):
    """Raised when a serialized rulebase cannot be parsed."""


@dataclass(frozen=True)
class Transaction:
    """One training example: a tag itemset plus its class label."""

    items: frozenset
    label: str

    @property
    def basket(self) -> frozenset:
        return self.items | {self.label}


@dataclass(frozen=True)
class Rule:
    """Class association rule ``antecedent -> consequent`` with percent stats."""

    antecedent: frozenset
    consequent: str
    support: float
    confidence: float

    def sort_key(self) -> tuple:
        return (
            -self.confidence,
            -self.support,
            -len(self.antecedent),
            tuple(sorted(self.antecedent)),
            self.consequent,
        )


@dataclass(frozen=True)
class RuleBase:
    """An ordered rule list with the thresholds it was mined under."""

    rules: tuple
    minsup: float = DEFAULT_MINSUP
    minconf: float = DEFAULT_MINCONF
    metadata: tuple = ()  # ((key, value), ...) extra header entries

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def _check_percent(value: float, name: str) -> None:
    if not (0.0 < value <= 100.0):
        raise MiningError(f"{name} must be in (0, 100], got {value}")


def mine_frequent(
    transactions: Sequence[Transaction], minsup: float
) -> Dict[FrozenSet[str], float]:
    """All itemsets over tags plus class items with support >= minsup percent.

    Level-wise Apriori: candidates of size k are joins of frequent (k-1)-sets
    and are pruned unless every (k-1)-subset is frequent (downward closure).
    """
    if not transactions:
        raise MiningError("cannot mine an empty transaction list")
    _check_percent(minsup, "minsup")
    baskets = [t.basket for t in transactions]
    n = len(baskets)

    def support(count: int) -> float:
        return 100.0 * count / n

    counts = Counter(item for basket in baskets for item in basket)
    frequent: Dict[FrozenSet[str], float] = {}
    level = []
    for item, count in counts.items():
        if support(count) >= minsup:
            itemset = frozenset({item})
            frequent[itemset] = support(count)
            level.append(itemset)

    k = 2
    while level:
        seen = set(level)
        candidates = set()
        ordered = sorted(level, key=lambda s: tuple(sorted(s)))
        for a, b in combinations(ordered, 2):
            joined = a | b
            if len(joined) != k:
                continue
            if all(joined - {item} in seen for item in joined):
                candidates.add(joined)
        if not candidates:
            break
        tallies = {c: 0 for c in candidates}
        for basket in baskets:
            for candidate in candidates:
                if candidate <= basket:
                    tallies[candidate] += 1
        level = []
        for candidate, count in tallies.items():
            if support(count) >= minsup:
                frequent[candidate] = support(count)
                level.append(candidate)
        k += 1
    return frequent


def generate_rules(
    frequent: Mapping[FrozenSet[str], float],
    minconf: float,
    classes: Iterable[str],
    minsup: float = DEFAULT_MINSUP,
    metadata: tuple = (),
) -> RuleBase:
    """Rules ``X -> c`` from frequent itemsets holding exactly one class item.

    Confidence is support(X u {c}) / support(X); antecedents are non-empty.
    """
    _check_percent(minconf, "minconf")
    class_set = frozenset(classes)
    rules: List[Rule] = []
    for itemset, sup in frequent.items():
        class_items = itemset & class_set
        if len(class_items) != 1 or len(itemset) < 2:
            continue
        consequent = next(iter(class_items))
        antecedent = itemset - class_items
        confidence = 100.0 * sup / frequent[antecedent]
        if confidence >= minconf:
            rules.append(Rule(antecedent, consequent, sup, confidence))
    rules.sort(key=Rule.sort_key)
    return RuleBase(tuple(rules), minsup=minsup, minconf=minconf, metadata=metadata)


def mine_rules(
    transactions: Sequence[Transaction],
    minsup: float = DEFAULT_MINSUP,
    minconf: float = DEFAULT_MINCONF,
    classes: Optional[Iterable[str]] = None,
    metadata: tuple = (),
) -> RuleBase:
    """Convenience wrapper: mine frequent itemsets, then generate rules."""
    if classes is None:
        classes = {t.label for t in transactions}
    frequent = mine_frequent(transactions, minsup)
    return generate_rules(frequent, minconf, classes, minsup=minsup, metadata=metadata)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def serialize_rulebase(rb: RuleBase) -> str:
    """Text form: '# key=value' headers, then 'a,b -> c<TAB>sup<TAB>conf' lines."""
    lines = [f"# minsup={rb.minsup!r}", f"# minconf={rb.minconf!r}"]
    lines.extend(f"# {key}={value}" for key, value in rb.metadata)
    for rule in rb.rules:
        antecedent = ",".join(sorted(rule.antecedent))
        lines.append(f"{antecedent} -> {rule.consequent}\t{rule.support!r}\t{rule.confidence!r}")
    return "\n".join(lines) + "\n"


def parse_rulebase(text: str) -> RuleBase:
    """Inverse of serialize_rulebase; raises RuleBaseFormatError with line numbers."""
    minsup, minconf = DEFAULT_MINSUP, DEFAULT_MINCONF
    metadata: List[tuple] = []
    rules: List[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                key, value = key.strip(), value.strip()
                if key == "minsup":
                    minsup = float(value)
                elif key == "minconf":
                    minconf = float(value)
                else:
                    metadata.append((key, value))
            continue
        try:
            head, sup_s, conf_s = line.split("\t")
            antecedent_s, _, consequent = head.partition(" -> ")
            if not _ or not consequent or not antecedent_s:
                raise ValueError("missing ' -> '")
            antecedent = frozenset(p.strip() for p in antecedent_s.split(",") if p.strip())
            if not antecedent:
                raise ValueError("empty antecedent")
            rules.append(Rule(antecedent, consequent.strip(), float(sup_s), float(conf_s)))
        except ValueError as exc:
            raise RuleBaseFormatError(f"line {lineno}: cannot parse rule {raw!r}: {exc}") from None
    rules.sort(key=Rule.sort_key)
    return RuleBase(tuple(rules), minsup=minsup, minconf=minconf, metadata=tuple(metadata))


def dump_transactions(transactions: Sequence[Transaction], sort_key=None) -> str:
    """Debug dump, one 'item, item, label' line per transaction."""
    key = sort_key or (lambda item: item)
    lines = []
    for t in transactions:
        items = sorted(t.items, key=key)
        lines.append(", ".join([*items, t.label]))
    return "\n".join(lines) + "\n"


def parse_transactions(text: str) -> List[Transaction]:
    """Inverse of dump_transactions (last item on each line is the label)."""
    out: List[Transaction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",") if p.strip()]
        if not parts:
            raise RuleBaseFormatError(f"line {lineno}: empty transaction")
        out.append(Transaction(frozenset(parts[:-1]), parts[-1]))
    return out
