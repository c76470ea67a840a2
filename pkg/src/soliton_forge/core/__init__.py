"""Core numerical modules for soliton-forge."""
