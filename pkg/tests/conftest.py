"""Shared pytest setup; keeps tests/ importable as plain modules."""
