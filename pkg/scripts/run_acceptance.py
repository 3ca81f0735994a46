#!/usr/bin/env python3
"""Run the acceptance gate and show one PASS/FAIL line per criterion.

Equivalent to ``pytest tests/test_acceptance.py -s``; exits non-zero if
any criterion fails. The optional integration criterion is skipped
unless the environment points at pretrained weights and the full
datasets (see tests/test_acceptance.py for the variable names).

Usage: python scripts/run_acceptance.py [extra pytest args]
"""

import os
import sys

import pytest

if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    gate = os.path.join(here, "..", "tests", "test_acceptance.py")
    sys.exit(pytest.main([gate, "-s", "-v", "--no-header", *sys.argv[1:]]))
