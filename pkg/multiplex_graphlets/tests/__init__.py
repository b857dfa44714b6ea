"""Unit tests for multiplex_graphlets."""
