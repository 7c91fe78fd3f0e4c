from .database import Database
from .models import Base, FailedRun, KLRecord

__all__ = ["Database", "Base", "FailedRun", "KLRecord"]
