import logging
import sys

from job import cli
from lib.config import config

if __name__ == "__main__":
    log_level = config.get("LOG_LEVEL")
    logging.basicConfig(level=logging.getLevelName(log_level))

    sys.exit(cli.run(sys.argv[1:]))
