"""The lutool package runner file."""
import sys

from lutool.cli import main


if __name__ == '__main__':
    sys.exit(main())
