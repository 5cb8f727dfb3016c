"""Tests for monoforge."""
