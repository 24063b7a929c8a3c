"""Exact linear algebra over Z and Z/N."""
