"""FastAPI service exposing the analytics over HTTP."""

from .app import app

__all__ = ["app"]
