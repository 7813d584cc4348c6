import sys
from pathlib import Path

from loguru import logger

from src.consts import Config
from src.scenarios import main as cli_main


def main() -> int:
    abs_path = Path(__file__).parent.parent.absolute()

    logger.remove()
    logger.add(sys.stderr, level=Config.LOG_LEVEL)
    logger.add(
        abs_path / Config.LOG_FILE,
        format="{time:YYYY-MM-DD HH:mm:ss.SSS} {level:<7} {message}",
        level='DEBUG',
        rotation="00:00",
        compression="zip",
    )

    return cli_main(sys.argv[1:])


if __name__ == '__main__':
    logger.info('Запуск решателя...')
    status = main()
    logger.info('Решатель завершил работу')
    sys.exit(status)
