"""CLI and HTTP run-control for infocap experiments."""
