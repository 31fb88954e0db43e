#!/usr/bin/env python3
"""
Keyword tracker launcher.

Runs the command-line interface from a source checkout without
installing the package, e.g. ``python tracker.py train --help``.
"""

from keyword_tracker.cli import main

if __name__ == "__main__":
    main()
