"""Coordinate tensor calculus on charts, evaluated through Taylor jets."""
