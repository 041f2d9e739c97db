#!/usr/bin/env python3
"""
Run wzbench as ``python -m cli``; same commands and exit codes as the ``wzbench`` script.
"""

import sys

from . import app

if __name__ == "__main__":
    sys.exit(app(prog_name="wzbench"))
