import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String
from sqlalchemy.orm import relationship

from src.db.models.base_model import BaseModel


class Run(BaseModel):
    __tablename__ = 'runs'
    __repr_columns__ = ('id', 'scenario', 'levels', 'dt', 'convection_on')

    id = Column(Integer, primary_key=True, autoincrement=True, nullable=False)
    scenario = Column(String(16), nullable=False, index=True)
    levels = Column(Integer, nullable=False)
    dt = Column(Float, nullable=False)
    t_final = Column(Float, nullable=False)
    convection_on = Column(Boolean, default=True, nullable=False)
    created_time = Column(
        DateTime, default=datetime.datetime.utcnow, nullable=False
    )

    results = relationship(
        'LevelResult', back_populates='run', cascade='all, delete-orphan'
    )
