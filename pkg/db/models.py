from datetime import datetime
from sqlalchemy import Column, DateTime, Float, Index, Integer, String, Text
from sqlalchemy.orm import DeclarativeBase


class Base(DeclarativeBase):
    pass


class KLRecord(Base):
    """One scored benchmark run."""
    __tablename__ = "kl_results"

    id = Column(Integer, primary_key=True)
    config_id = Column(String(64), nullable=False)
    input_dim = Column(Integer, nullable=False)
    data_ratio = Column(Integer, nullable=False)
    noise_std = Column(Float, nullable=False)
    method = Column(String(32), nullable=False)
    seed = Column(Integer, nullable=False)
    mean_kl = Column(Float, nullable=False)
    master_seed = Column(String(20))  # u64 does not fit a signed SQLite integer
    created_at = Column(DateTime, default=datetime.utcnow)

    __table_args__ = (
        Index("idx_kl_config_method", "config_id", "method"),
        Index("idx_kl_method", "method"),
    )

    @property
    def label(self) -> str:
        return f"{self.config_id}/{self.method}/seed={self.seed}"


class FailedRun(Base):
    """A run excluded from aggregates, with the error that stopped it."""
    __tablename__ = "failed_runs"

    id = Column(Integer, primary_key=True)
    config_id = Column(String(64), nullable=False)
    method = Column(String(32), nullable=False)
    seed = Column(Integer, nullable=False)
    error = Column(Text)
    master_seed = Column(String(20))  # u64 does not fit a signed SQLite integer
    created_at = Column(DateTime, default=datetime.utcnow)
