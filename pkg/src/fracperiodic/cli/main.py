import sys

from loguru import logger

from fracperiodic.cli.commands import run
from fracperiodic.cli.config import parse_config

LOG_FORMAT = '<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{function} - {message}'


def configure_logging(level='INFO'):
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)


def main(argv=None) -> int:
    """Exit status: 0 success, 1 failed check or solver error, 2 bad arguments."""
    try:
        config = parse_config(argv)
    except SystemExit as e:
        # argparse reports its own usage errors
        return int(e.code or 0) and 2
    except (ValueError, AssertionError) as e:
        configure_logging()
        logger.error(f'Invalid arguments: {e}')
        return 2

    configure_logging(config.log_level)
    logger.info(f'Running {config.command} with s = {config.s:g}.')
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
