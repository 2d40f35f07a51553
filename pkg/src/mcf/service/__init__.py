"""HTTP service exposing every pipeline; the CLI shares its handlers."""

from .app import create_app

__all__ = ["create_app"]
