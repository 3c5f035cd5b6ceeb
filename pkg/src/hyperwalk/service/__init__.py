"""HTTP service: pydantic schemas, handler layer, FastAPI app."""

from .app import app, create_app

__all__ = ["app", "create_app"]
