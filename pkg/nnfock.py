"""
Entry point for the nnfock command line.

    python nnfock.py validate data/catalog/poisson.json
    python nnfock.py catalog --name bozejko --degree 6
"""

import sys

from src.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
