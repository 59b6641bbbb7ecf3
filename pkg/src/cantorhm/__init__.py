"""Finite-depth combinatorics of pair-colorings on Cantor and Baire space.

Submodules:

* :mod:`cantorhm.seqspace`  -- truncated sequence spaces, Delta, interleaving
* :mod:`cantorhm.rado`      -- the BIT copy of the Rado graph, embeddings, norm
* :mod:`cantorhm.colorings` -- c_min, c_parity, c_random, c_max and friends
* :mod:`cantorhm.homog`     -- homogeneous sets and the exact hm solver
* :mod:`cantorhm.lipfn`     -- dyadic Lipschitz maps and square covers
* :mod:`cantorhm.covfun`    -- covering a finite square by arbitrary functions
* :mod:`cantorhm.graphperf` -- clique/chromatic numbers and perfection
* :mod:`cantorhm.cli`       -- the ``cantorhm`` experiment driver
"""

from .errors import CantorError, ContractError, InternalError, ParseError, ResourceError, UsageError

__version__ = "0.1.0"

__all__ = [
    "CantorError",
    "ContractError",
    "InternalError",
    "ParseError",
    "ResourceError",
    "UsageError",
]
