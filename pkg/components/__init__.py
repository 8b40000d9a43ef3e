"""One renderer per command."""
