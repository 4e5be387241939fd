"""
Database connection and session management for the derived-table cache.
"""
from contextlib import contextmanager
import os
import sys
import logging

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker
from sqlalchemy.pool import StaticPool

logger = logging.getLogger(__name__)

# Determine if we're in testing mode
is_testing = "pytest" in sys.modules

# Cache directory and URL - both can be overridden with environment variables
CACHE_DIR = os.getenv("YANGIAN_CACHE_DIR", "./.yangian-cache")
CACHE_URL = os.getenv("YANGIAN_CACHE_URL", f"sqlite:///{CACHE_DIR}/tables.db")

# For testing, always use SQLite in-memory database
if is_testing:
    CACHE_URL = "sqlite:///:memory:"
    logger.info("Using in-memory SQLite cache for testing")
else:
    logger.info(f"Using cache: {CACHE_URL}")

connect_args = {}
engine_args = {}
if CACHE_URL.startswith("sqlite"):
    connect_args = {"check_same_thread": False}
    if ":memory:" in CACHE_URL:
        # one shared connection, otherwise every session sees an empty database
        engine_args = {"poolclass": StaticPool}
    elif CACHE_URL == f"sqlite:///{CACHE_DIR}/tables.db":
        os.makedirs(CACHE_DIR, exist_ok=True)

engine = create_engine(CACHE_URL, connect_args=connect_args, **engine_args)

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def init_db() -> None:
    """Create the cache tables if they do not exist yet."""
    Base.metadata.create_all(bind=engine)


@contextmanager
def session_scope():
    """
    Open a session, commit on success, roll back on error and always close it.
    """
    db = SessionLocal()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()
