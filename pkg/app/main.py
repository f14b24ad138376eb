import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.api.api import build_parser
from app.core.config import settings
from app.core.errors import KatError

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except KatError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        print(f"error: invalid input\n{exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
