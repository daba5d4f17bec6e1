#!/usr/bin/env python3
"""
Greedoid Lattice Toolkit - Main Entry Point

Runs the command-line surface over interval greedoids, their flats and
their oriented covector sets.
"""

import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.cli import run
from src.core.config import settings


def main() -> int:
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
