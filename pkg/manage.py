#!/usr/bin/env python
"""Command-line utility for the superbider verification tasks."""
import os
import sys


def main():
    """Run verification tasks."""
    project_root = os.path.dirname(os.path.abspath(__file__))
    sys.path.insert(0, project_root)

    try:
        from src.cli import cli
    except ImportError as exc:
        raise ImportError(
            "Couldn't import the verification tool. Are its requirements "
            "installed and available on your PYTHONPATH environment variable? "
            "Did you forget to activate a virtual environment?"
        ) from exc
    cli(prog_name="manage.py")


if __name__ == "__main__":
    main()
