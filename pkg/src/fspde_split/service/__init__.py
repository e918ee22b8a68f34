"""HTTP facade: long-running studies as jobs, oracles as endpoints."""

from .app import app, create_app

__all__ = ["app", "create_app"]
