# Licensed under the MIT License.
"""
ORM models for experiment results
"""

from sqlalchemy import Column, Float, Integer, String
from sqlalchemy.ext.declarative import declarative_base


Base = declarative_base()

# pylint: disable=too-few-public-methods


class RecoveryTrial(Base):
    """
    Edge recovery of one method on one generated instance
    """

    __tablename__ = "RecoveryTrial"
    id = Column(Integer, primary_key=True)
    experiment = Column(String, nullable=False, index=True)
    p = Column(Float, nullable=False)
    q = Column(Float, nullable=False)
    modes = Column(Integer, nullable=False)
    method = Column(String, nullable=False)
    trial = Column(Integer, nullable=False)
    recovery = Column(Float, nullable=False)


class OrderingPoint(Base):
    """
    Full-network overlap of an alignment made from the top modes of an ordering
    """

    __tablename__ = "OrderingPoint"
    id = Column(Integer, primary_key=True)
    experiment = Column(String, nullable=False, index=True)
    measure = Column(String, nullable=False)
    modes_used = Column(Integer, nullable=False)
    overlap = Column(Integer, nullable=False)
