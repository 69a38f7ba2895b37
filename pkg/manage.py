#!/usr/bin/env python
"""Manage.py file for the machine scientist"""
import sys

if __name__ == "__main__":
    from scientist.cli import main
    sys.exit(main(sys.argv[1:]))
