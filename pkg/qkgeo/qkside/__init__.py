"""Quaternionic Kähler side of the correspondence: the Przanowski-Tod ansatz and the g^{a,b,c} family."""
