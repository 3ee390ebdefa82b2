"""Decision procedures with certificates for properties of finite modules."""

from __future__ import annotations

__version__ = "0.1.0"
