"""Allow running as: python -m lzcli"""

from lzcli.cli import main

main()
