#!/usr/bin/env python3
"""
Quandle workbench
Constructs Dehn, Coxeter and homological quandles, enumerates finite
quandle quotients from presentations and checks their structure.
"""

import sys
from pathlib import Path

# Make the src package importable when run from anywhere
sys.path.insert(0, str(Path(__file__).parent))

from src.controllers.app_controller import AppController  # noqa: E402


if __name__ == '__main__':
    sys.exit(AppController().run(sys.argv[1:]))
