"""
Description:
🧮 Command-line entry point of the b_v(s)-metric laboratory.

Version: 1.0.0
"""

import sys

from lab import main as run_lab

if __name__ == "__main__":
    sys.exit(run_lab())
