"""One-off generator for tests/data/chunk_goldens.json.

Trees are produced by the reference chunker (tests/reference_chunker.py) and
frozen; the test suite then holds the production chunker to these trees and
re-checks them against the live reference implementation.

Run from the repository root:  python tests/make_chunk_goldens.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import reference_chunker as ref  # noqa: E402

GRAMMAR_DIR = Path(__file__).parent.parent / "src" / "finsent" / "data"

# (grammar name, pretagged sentence) pairs chosen to exercise every pairing
# alternative, the numeric alternatives, parentheticals, commas, possessives,
# runs of proper nouns, and no-match sentences.
CASES = [
    ("indicator_direction", "market_NN share_NN increase_VB"),
    ("indicator_direction", "details_NNS disclosed_VBN"),
    ("indicator_direction", "sales_NNS rose_VBD"),
    ("indicator_direction", "Turnover_NN rose_VBD to_TO EUR_NNP 21mn_CD from_IN EUR_NNP 17mn_CD"),
    ("indicator_direction",
     "Olvi_NNP expects_VBZ market_NN share_NN to_TO increase_VB in_IN the_DT first_JJ quarter_NN of_IN 2010_CD"),
    ("indicator_direction",
     "Unit_NN costs_NNS for_IN flight_NN operations_NNS fell_VBD by_IN 6.4_CD percent_NN"),
    ("indicator_direction", "The_DT company_NN won_VBD new_JJ contracts_NNS in_IN Finland_NNP"),
    ("indicator_direction",
     "Demand_NN for_IN fireplace_NN products_NNS was_VBD lower_JJR than_IN expected_VBN"),
    ("indicator_direction", "She_PRP welcomed_VBD the_DT new_JJ employees_NNS"),
    ("indicator_direction", "It_PRP acquired_VBD Aspo_NNP 's_POS strong_JJ brands_NNS"),
    ("indicator_direction", "gave_VBD it_PRP strong_JJ growth_NN in_IN sales_NNS"),
    ("indicator_direction", "profit_NN moved_VBD to_TO a_DT record_NN"),
    ("indicator_direction", "sales_NNS in_IN Finland_NNP ,_, however_RB fell_VBD"),
    ("indicator_direction",
     "strong_JJ sales_NNS beat_VBD estimates_NNS ,_, the_DT forecast_NN"),
    ("indicator_direction", "strong_JJ demand_NN continued_VBD"),
    ("indicator_direction",
     "EBIT_NNP (_( operating_NN profit_NN )_) of_IN total_JJ sales_NNS improved_VBD"),
    ("indicator_direction", "The_DT company_NN"),
    ("indicator_direction", "The_DT"),
    ("indicator_direction", "It_PRP was_VBD good_JJ"),
    ("indicator_direction", "Profit_NN ,_, however_RB ,_, fell_VBD"),
    ("indicator_direction", "costs_NNS fell_VBD by_IN 6.4_CD percent_NN"),
    ("indicator_direction", "inventory_NN turns_NNS improved_VBD significantly_RB"),
    ("indicator_direction", "growth_NN remained_VBD strong_JJ"),
    ("indicator_direction", "President_NNP Jones_NNP sales_NNS fell_VBD"),
    ("indicator_direction",
     "Comparable_JJ operating_NN profit_NN totaled_VBD EUR_NNP 854_CD mn_NN"),
    ("indicator_direction", "He_PRP said_VBD sales_NNS would_MD fall_VB"),
    ("numeric_direction",
     "Operating_NN profit_NN margin_NN was_VBD 8.3_CD %_NN ,_, compared_VBN to_TO 11.8_CD %_NN a_DT year_NN earlier_RBR"),
    ("numeric_direction", "sales_NN of_IN phones_NN 21_CD ,_, grew_VBD from_IN Nokia_NNP 17_CD"),
    ("numeric_direction", "Turnover_NN was_VBD EUR_NNP 21mn_CD ,_, up_RB from_IN EUR_NNP 17mn_CD"),
    ("numeric_direction", "margin_NN was_VBD 5.0_CD %_NN ,_, compared_VBN to_TO 5.0_CD %_NN"),
    ("numeric_direction", "It_PRP was_VBD higher_JJR"),
    ("numeric_direction", "The_DT figure_NN was_VBD 14_CD %_NN versus_IN 12_CD %_NN"),
]


def main() -> None:
    grammars = {
        name: ref.parse_grammar((GRAMMAR_DIR / f"{name}.grammar").read_text())
        for name in ("indicator_direction", "numeric_direction")
    }
    goldens = []
    for grammar_name, pretagged in CASES:
        tokens = [unit.rsplit("_", 1) for unit in pretagged.split()]
        tree = ref.chunk_sentence(grammars[grammar_name], [(s, t) for s, t in tokens])
        goldens.append(
            {
                "grammar": grammar_name,
                "pretagged": pretagged,
                "tree": ref.to_bracket(tree),
            }
        )
    out = Path(__file__).parent / "data" / "chunk_goldens.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(goldens, indent=2) + "\n")
    print(f"wrote {len(goldens)} goldens to {out}")
    for g in goldens:
        print(f"[{g['grammar'][:9]}] {g['tree']}")


if __name__ == "__main__":
    main()
