from pathlib import Path

from sqlalchemy import create_engine, func
from sqlalchemy.orm import Session, sessionmaker

from .models import Base, FailedRun, KLRecord


def _record_to_dict(rec: KLRecord) -> dict:
    """Convert a KLRecord ORM object to a plain dict (avoids detached session issues)."""
    return {
        "id": rec.id,
        "config_id": rec.config_id,
        "input_dim": rec.input_dim,
        "data_ratio": rec.data_ratio,
        "noise_std": rec.noise_std,
        "method": rec.method,
        "seed": rec.seed,
        "mean_kl": rec.mean_kl,
        "master_seed": rec.master_seed,
        "label": rec.label,
    }


class Database:
    """SQLite store for benchmark runs, one file per run directory."""

    def __init__(self, db_path: Path):
        self.db_path = db_path
        db_path.parent.mkdir(parents=True, exist_ok=True)
        self.engine = create_engine(f"sqlite:///{db_path}", echo=False)
        Base.metadata.create_all(self.engine)
        self.SessionLocal = sessionmaker(bind=self.engine)

    def get_session(self) -> Session:
        return self.SessionLocal()

    def add_results(self, results, configs: dict, master_seed: int | None = None) -> int:
        """Insert KLResult rows; configs maps config_id to its BenchConfig."""
        with self.get_session() as session:
            for r in results:
                cfg = configs[r.config_id]
                session.add(
                    KLRecord(
                        config_id=r.config_id,
                        input_dim=cfg.input_dim,
                        data_ratio=cfg.data_ratio,
                        noise_std=cfg.noise_std,
                        method=r.method_id,
                        seed=r.seed,
                        mean_kl=r.mean_kl,
                        master_seed=None if master_seed is None else str(master_seed),
                    )
                )
            session.commit()
        return len(results)

    def add_failures(self, failures, master_seed: int | None = None) -> int:
        with self.get_session() as session:
            for f in failures:
                session.add(
                    FailedRun(
                        config_id=f.config_id,
                        method=f.method_id,
                        seed=f.seed,
                        error=f.error,
                        master_seed=None if master_seed is None else str(master_seed),
                    )
                )
            session.commit()
        return len(failures)

    def get_results(self, method: str | None = None, config_id: str | None = None) -> list[dict]:
        """Stored runs ordered by config, method and seed. Returns plain dicts."""
        with self.get_session() as session:
            query = session.query(KLRecord)
            if method is not None:
                query = query.filter(KLRecord.method == method)
            if config_id is not None:
                query = query.filter(KLRecord.config_id == config_id)
            rows = query.order_by(KLRecord.config_id, KLRecord.method, KLRecord.seed).all()
            return [_record_to_dict(r) for r in rows]

    def count_failures(self) -> int:
        with self.get_session() as session:
            return session.query(FailedRun).count()

    def method_summary(self) -> list[dict]:
        """Per method: number of runs and raw mean KL over every stored run."""
        with self.get_session() as session:
            rows = (
                session.query(KLRecord.method, func.count(KLRecord.id), func.avg(KLRecord.mean_kl))
                .group_by(KLRecord.method)
                .order_by(KLRecord.method)
                .all()
            )
            return [{"method": m, "runs": n, "mean_kl": float(avg)} for m, n, avg in rows]
