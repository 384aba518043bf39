import logging
import sys

from src.cli.app import USAGE_ERROR, run
from src.config import load_settings
from src.engine.errors import ConfigurationError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------
# CLI entrypoint
# ---------------------------------------------------------
def main() -> None:
    try:
        level = load_settings().log_level
    except ConfigurationError as ex:
        print(f"error: {ex}", file=sys.stderr)
        sys.exit(USAGE_ERROR)

    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s:%(name)s:%(message)s",
    )
    logger.debug(f"[CLI] argv={sys.argv[1:]}")
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
