"""
geomt CLI entry point
"""

import sys

from geomt.cli import main

if __name__ == "__main__":
    sys.exit(main())
