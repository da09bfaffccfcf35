"""
`python -m dtanma`: run the command line and exit with its status
"""

import sys

from dtanma.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli())
