"""Test suite for soliton-forge."""
