from sqlalchemy import Column, Float, ForeignKey, Integer, String
from sqlalchemy.orm import relationship

from src.db.models.base_model import BaseModel


class LevelResult(BaseModel):
    """
    Ошибка одного поля на одном уровне сетки; rate пустой на первом
    уровне и там, где порядок не определён.
    """

    __tablename__ = 'level_results'
    __repr_columns__ = ('id', 'run_id', 'level', 'field', 'error', 'rate')

    id = Column(Integer, primary_key=True, autoincrement=True, nullable=False)
    run_id = Column(
        Integer, ForeignKey('runs.id'), nullable=False, index=True
    )
    level = Column(Integer, nullable=False)
    h_f = Column(Float, nullable=False)
    h_p = Column(Float, nullable=False)
    h_tf = Column(Float, nullable=False)
    h_tp = Column(Float, nullable=False)
    field = Column(String(16), nullable=False)
    error = Column(Float, nullable=False)
    rate = Column(Float)
    iterations = Column(Float, nullable=False)

    run = relationship('Run', back_populates='results')
