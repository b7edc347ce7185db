"""Rotation sets of a bouquet map on the torus skeleton."""
