"""
Test configuration and fixtures for the Yangian kernel tests.
"""
import pytest

from app.database import Base, engine, SessionLocal
from app.logic.algebra import AlgebraKind
from app.logic.mode_algebra import RULE_STORE, ModeAlgebra
from app.schemas import TrustBox

# Desk-scale windows; everything heavier belongs to the CLI suite, not the unit tests
SMALL_BOX = TrustBox(lminus=1, lplus=2, maxlen=2)
TINY_BOX = TrustBox(lminus=1, lplus=1, maxlen=2)
ACCEPTANCE_BOX = TrustBox(lminus=2, lplus=2, maxlen=3)


@pytest.fixture(scope="session")
def a2():
    return AlgebraKind.parse("A2")


@pytest.fixture(scope="session")
def a3():
    return AlgebraKind.parse("A3")


@pytest.fixture(scope="session")
def b2():
    return AlgebraKind.parse("B2")


@pytest.fixture(scope="session")
def c2():
    return AlgebraKind.parse("C2")


@pytest.fixture(scope="session")
def d2():
    return AlgebraKind.parse("D2")


@pytest.fixture(scope="session")
def small_box():
    return SMALL_BOX


@pytest.fixture(scope="session")
def tiny_box():
    return TINY_BOX


@pytest.fixture(scope="module")
def a2_algebra(a2):
    """Shared rewrite system for A2; its commutator table lives in the process-wide store."""
    return ModeAlgebra(a2, SMALL_BOX)


@pytest.fixture(scope="module")
def b2_algebra(b2):
    return ModeAlgebra(b2, TINY_BOX)


@pytest.fixture(scope="function")
def test_db():
    """
    Create the cache tables in the in-memory database and yield a session.
    """
    Base.metadata.create_all(bind=engine)
    db = SessionLocal()

    yield db

    # Clean up after the test
    db.close()
    Base.metadata.drop_all(bind=engine)


@pytest.fixture
def fresh_rules():
    """
    Start from an empty commutator store and leave one behind.
    """
    RULE_STORE.clear()
    yield RULE_STORE
    RULE_STORE.clear()
