"""Tests for the machine scientist."""
