"""Tests for succinctness-workbench."""
