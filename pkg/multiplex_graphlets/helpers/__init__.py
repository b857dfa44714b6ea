"""Support code shared across the multiplex_graphlets package."""
