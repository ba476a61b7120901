"""Shared strategies and fakes for the test suite."""
