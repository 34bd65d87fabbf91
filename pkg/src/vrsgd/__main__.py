"""Allow `python -m vrsgd` as an alias for the vrsgd-bench script."""

from .bench import main

main()
