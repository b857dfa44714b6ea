"""Common constants, enums and exceptions."""
