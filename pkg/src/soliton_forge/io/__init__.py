"""I/O modules for problem documents, profile directories and reports."""
