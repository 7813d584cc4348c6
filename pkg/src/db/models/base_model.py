from sqlalchemy import inspect
from sqlalchemy.orm.exc import DetachedInstanceError

from src.db.db_session import SqlAlchemyBase


class BaseModel(SqlAlchemyBase):
    """
    Общая часть таблиц результатов: словарь колонок и repr,
    которому не мешают закрытые сессии.
    """

    __abstract__ = True
    __repr_columns__ = ('id',)

    def to_dict(self) -> dict:
        return {
            column.key: getattr(self, column.key)
            for column in inspect(type(self)).column_attrs
        }

    def __repr__(self):
        shown = []
        for name in self.__repr_columns__:
            try:
                shown.append(f'{name}={getattr(self, name)!r}')
            except DetachedInstanceError:
                shown.append(f'{name}=<detached>')
        return f"<{type(self).__name__}({', '.join(shown)})>"
