"""Keyed random streams, run configuration and the run ledger."""
