"""Expand the level-templated prelude source into the shipped ``.cht`` file.

Blocks between ``%levels N,M,...`` and ``%end`` are emitted once per level.
Inside a block ``Type @L`` / ``Type @U`` become the current level and the
one above it, ``name@`` gets the level's suffix (none at 0, else the
number) and ``name@+`` gets the suffix of the next level up.
"""

from __future__ import annotations

import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
SRC = ROOT / "cohesion.cht.in"
OUT = ROOT.parent / "src" / "cohott" / "data" / "prelude" / "cohesion.cht"


def suffix(level: int) -> str:
    return "" if level == 0 else str(level)


def instantiate(block: str, level: int) -> str:
    out = block.replace("@L", str(level)).replace("@U", str(level + 1))
    out = re.sub(r"([A-Za-z_][A-Za-z0-9_']*)@\+", lambda m: m.group(1) + suffix(level + 1), out)
    return re.sub(r"([A-Za-z_][A-Za-z0-9_']*)@", lambda m: m.group(1) + suffix(level), out)


def expand(text: str) -> str:
    out: list[str] = []
    lines = text.splitlines(keepends=True)
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("%levels"):
            levels = [int(x) for x in line.split(None, 1)[1].split(",")]
            j = i + 1
            while not lines[j].startswith("%end"):
                j += 1
            block = "".join(lines[i + 1 : j])
            for lv in levels:
                out.append(instantiate(block, lv))
            i = j + 1
            continue
        out.append(line)
        i += 1
    return "".join(out)


def main() -> int:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(expand(SRC.read_text(encoding="utf-8")), encoding="utf-8")
    print(OUT)
    return 0


if __name__ == "__main__":
    sys.exit(main())
