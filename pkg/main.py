#!/usr/bin/env python3
"""Run the mandelrays CLI from a source checkout: python main.py knead 1/7"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from mandelrays.cli import main

if __name__ == "__main__":
    main()
