#!/usr/bin/env python3
"""
Command-line entry point: python run.py equiv --tests b,c --progs p,q A B
"""

import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
