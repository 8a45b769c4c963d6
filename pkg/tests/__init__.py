"""Tests for dqs."""
