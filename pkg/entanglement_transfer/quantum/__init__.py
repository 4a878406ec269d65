"""Numerical core: special functions, Fock and Gaussian state calculus,
device models, channels and entanglement quantifiers."""
