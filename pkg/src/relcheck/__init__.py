"""Related fact check retrieval: corpus ingestion, ranking, topic themes, service."""

__version__ = "0.1.0"
