from logging.config import fileConfig

from alembic import context
from sqlalchemy import engine_from_config, pool

from src.db.db_session import SqlAlchemyBase
import src.db.__all_models  # noqa


config = context.config

if config.config_file_name is not None:
    fileConfig(config.config_file_name)

# Таблицы результатов: runs, level_results
target_metadata = SqlAlchemyBase.metadata


def run_migrations_offline() -> None:
    """
    SQL-скрипт миграции без подключения к базе.
    """

    context.configure(
        url=config.get_main_option("sqlalchemy.url"),
        target_metadata=target_metadata,
        literal_binds=True,
        dialect_opts={"paramstyle": "named"},
        render_as_batch=True,
    )

    with context.begin_transaction():
        context.run_migrations()


def run_migrations_online() -> None:
    connectable = engine_from_config(
        config.get_section(config.config_ini_section, {}),
        prefix="sqlalchemy.",
        poolclass=pool.NullPool,
    )

    with connectable.connect() as connection:
        # SQLite не умеет ALTER COLUMN, поэтому batch-режим
        context.configure(
            connection=connection,
            target_metadata=target_metadata,
            render_as_batch=True,
        )

        with context.begin_transaction():
            context.run_migrations()


if context.is_offline_mode():
    run_migrations_offline()
else:
    run_migrations_online()
