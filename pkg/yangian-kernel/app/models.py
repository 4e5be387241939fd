"""
Database models for the derived-table cache.
"""
from sqlalchemy import Column, DateTime, Integer, String, Text
from sqlalchemy.sql import func
import json

from .database import Base


class CommutatorTableRecord(Base):
    """
    Commutator rules derived for one (algebra, TrustBox, derivation version).
    """
    __tablename__ = "commutator_tables"

    id = Column(Integer, primary_key=True, index=True)
    content_hash = Column(String(64), unique=True, index=True)
    algebra = Column(String, index=True)
    version = Column(String)

    # SQLite has no JSON type; the rules are serialized into Text
    rules_json = Column(Text)

    created_at = Column(DateTime(timezone=True), server_default=func.now())

    @property
    def rules(self):
        """Deserialize the rule list from the Text field."""
        if self.rules_json:
            return json.loads(self.rules_json)
        return []

    @rules.setter
    def rules(self, value):
        self.rules_json = json.dumps(value, sort_keys=True)

    def __repr__(self):
        return f"<CommutatorTableRecord(id={self.id}, algebra={self.algebra}, version={self.version}, rules={len(self.rules)})>"
