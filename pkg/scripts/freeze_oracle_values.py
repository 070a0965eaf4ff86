"""Recompute the reference values in tests/data/oracle_values.json.

The oracle in tests/oracle.py does not import glnalg; rerun this only when
the oracle itself changes, then review the diff.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracle import all_values  # noqa: E402

target = ROOT / "tests" / "data" / "oracle_values.json"
target.write_text(json.dumps(all_values(), indent=2, sort_keys=True) + "\n")
print(f"wrote {target}")
