"""Numerical analysis of finitely generated linear group actions.

Subpackages cover spectral projections of matrices (`linalg`), free group
words and flow lines (`words`), domination and partial hyperbolicity scans
(`domination`), joint spectrum cones (`spectrum`), cocycle splittings along
flow lines (`flowbundle`), affine eigenvalue constraints (`affine`), and a
command line front end (`cli`).
"""

from __future__ import annotations

__version__ = "0.1.0"

from . import affine, domination, errors, flowbundle, linalg, spectrum, words

__all__ = [
    "affine",
    "domination",
    "errors",
    "flowbundle",
    "linalg",
    "spectrum",
    "words",
    "__version__",
]
