import sys

import config  # noqa: F401  (logging setup)
from cli import run


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
