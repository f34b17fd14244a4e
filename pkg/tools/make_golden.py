"""Regenerate the golden files from a kernel run.

Writes the prelude manifest (counts plus one ``tag name digest`` line per
postulate) and the stdlib status file (entry, tier and status per entry, for
the default run without assumptions).  Run after ``build_prelude.py``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from cohott import cohesion, stdlib

DATA = Path(__file__).resolve().parent.parent / "src" / "cohott" / "data"


def main() -> int:
    env = cohesion.load_prelude()
    manifest = DATA / "prelude" / "manifest.txt"
    manifest.write_text("\n".join(cohesion.manifest_lines(env)) + "\n", encoding="utf-8")
    print(manifest)

    report = stdlib.check_stdlib(env)
    rows = [{"entry": r.entry, "tier": r.tier, "status": r.status} for r in report.results]
    status = DATA / "stdlib" / "status.json"
    status.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
    print(status)
    return 0


if __name__ == "__main__":
    sys.exit(main())
