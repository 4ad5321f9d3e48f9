"""HTTP service exposing ranking and evaluation over JSON."""

from .app import create_app

__all__ = ["create_app"]
