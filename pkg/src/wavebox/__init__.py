"""Free-surface potential flow in a pinned box, instrumented for blow-up diagnostics."""

__version__ = "0.1.0"
