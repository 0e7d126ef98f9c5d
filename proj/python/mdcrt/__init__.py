"""Exact multidimensional CRT over integer vectors, robust reconstruction and lattice tools.

Matrices are lists of rows of Python ints. Rationals come back as fractions.Fraction.
Failures raise MdcrtError(code, message), a ValueError subclass.
"""

from ._core import (
    MdcrtError,
    __version__,
    algorithm1,
    algorithm2,
    below_bound,
    bound,
    crt,
    cvp,
    det,
    fig1,
    folding_vector,
    gcld,
    gcrd,
    hermite,
    is_left_coprime,
    is_right_coprime,
    lclm,
    lcrm,
    min_distance,
    mod_reduce,
    residue_set,
    scalar_crt,
    smith,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
