"""Hyper-Kähler side of the correspondence: Boyer-Finley metrics, rotating Killing data, and rigid c-map models."""
