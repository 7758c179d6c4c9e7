import logging
import sys

from khmix.cli.commands import build_parser
from khmix.core.config import LOG_FORMAT
from khmix.core.errors import KhmixError

logger = logging.getLogger("khmix")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # stdout carries command output only
    logging.basicConfig(format=LOG_FORMAT, level=args.log_level.upper(), stream=sys.stderr)
    try:
        return int(args.func(args))
    except KhmixError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
