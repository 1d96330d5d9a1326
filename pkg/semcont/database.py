"""Run ledger database: engine/session factory and declarative Base."""

from functools import lru_cache
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.orm import Session, sessionmaker

from semcont.config import settings

LEDGER_FILENAME = "ledger.db"

# Create Base class for declarative models
Base = declarative_base()


def ledger_url(artifact_dir: str | Path | None = None) -> str | None:
    """
    Ledger URL for an artifact directory.

    SEMCONT_LEDGER_URL overrides the default sqlite file inside the directory;
    an empty value disables the ledger (returns None).
    """
    if settings.SEMCONT_LEDGER_URL is not None:
        return settings.SEMCONT_LEDGER_URL or None
    if artifact_dir is None:
        return None
    return f"sqlite:///{(Path(artifact_dir) / LEDGER_FILENAME).resolve()}"


@lru_cache(maxsize=8)
def get_engine(url: str) -> Engine:
    # Handle postgres:// URLs (SQLAlchemy needs postgresql://)
    if url.startswith("postgres://"):
        url = url.replace("postgres://", "postgresql://", 1)
    if url.startswith("sqlite"):
        return create_engine(url, connect_args={"check_same_thread": False})
    return create_engine(url)


def init_db(url: str) -> sessionmaker:
    """Create all tables and return a session factory bound to `url`."""
    import semcont.models  # noqa: F401  (registers tables on Base.metadata)

    engine = get_engine(url)
    Base.metadata.create_all(bind=engine)
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


def get_db(url: str):
    """
    Yield a ledger session, closing it afterwards.

    Yields:
        Session: SQLAlchemy database session
    """
    db: Session = init_db(url)()
    try:
        yield db
    finally:
        db.close()
