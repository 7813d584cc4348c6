import contextlib
from pathlib import Path

import sqlalchemy
from loguru import logger
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError


SqlAlchemyBase = declarative_base()

__factory: sessionmaker | None = None
__db_file: str | None = None


def global_init(db_file: str | Path):
    """
    Подключение к базе результатов (SQLite), таблицы создаются сразу.
    Повторный вызов с тем же файлом ничего не делает, с другим -
    переподключает.
    """

    global __factory, __db_file

    if isinstance(db_file, str):
        db_file = db_file.strip()

    if not db_file:
        abort('Необходимо указать файл базы данных.', ConfigError)

    db_file = str(db_file)
    if __factory and __db_file == db_file:
        return

    Path(db_file).parent.mkdir(parents=True, exist_ok=True)
    conn_str = f'sqlite:///{db_file}?check_same_thread=False'

    engine = sqlalchemy.create_engine(conn_str, echo=False)

    logger.info(f'Подключение к базе результатов {db_file}')

    __factory = sessionmaker(bind=engine, expire_on_commit=False)
    __db_file = db_file

    from src.db import __all_models  # noqa

    SqlAlchemyBase.metadata.create_all(engine)


@contextlib.contextmanager
def create_session(do_commit: bool = False) -> Session:
    global __factory
    if not __factory:
        abort('База результатов не подключена: вызовите global_init', ConfigError)

    session = __factory()
    try:
        yield session
    except Exception as e:
        session.rollback()
        raise e
    finally:
        if do_commit:
            session.commit()
        session.close()
