"""Command implementations for the volsplit CLI."""
