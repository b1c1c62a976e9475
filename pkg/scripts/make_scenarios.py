#!/usr/bin/env python3
"""Regenerate the bundled scenario fixtures under scenarios/.

The files are produced deterministically from the builders in
pndeform.scenarios; the test suite asserts the checked-in copies match.
"""

import sys
from pathlib import Path

from pndeform.scenarios import write_fixtures


def main() -> int:
    target = Path(__file__).resolve().parent.parent / "scenarios"
    written = write_fixtures(str(target))
    for path in written:
        print(path)
    print(f"{len(written)} fixtures written to {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
