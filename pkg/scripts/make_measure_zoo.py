#!/usr/bin/env python3
"""
Write the standard measure zoo into a measure store directory.

Usage: python scripts/make_measure_zoo.py [DIRECTORY]
"""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from focklab.carleson import measure_zoo  # noqa: E402
from focklab.db import MeasureStore  # noqa: E402


def main() -> None:
    directory = sys.argv[1] if len(sys.argv) > 1 else str(project_root / "measures" / "zoo")
    store = MeasureStore(directory)
    for measure, params in measure_zoo():
        path = store.save(measure)
        print(f"✅ {measure.name:<12} {params.label():<12} {len(measure):>5} atoms -> {path}")


if __name__ == "__main__":
    main()
