"""Exact orbit computations for levels of loop groups of tori and compact groups.

The three faces of the same data (the ``char`` module, twisted equivariant
K-theory and positive-energy representations) are free on the orbits
``Lambda / K Z^n``; this package computes their induced maps and checks the
squares relating them.
"""

__version__ = "0.1.0"

from .combination import CharElement, OrbitRef, OrbitSpace, TwistedWeight
from .errors import *  # noqa: F401,F403
from .kview import (ORIENTATION, TeKClass, f_sharp, i1_sharp, md_iso, md_iso_inverse,
                    pushforward_finite, q_sharp, r_fibers, tek_basis)
from .lattice import IntMat, hnf_rows, kernel_saturated, lattice_basis, quotient, snf
from .orbits import (char_basis, char_covering, char_i1, char_image, char_local_injection,
                     char_space, char_via_decomposition, demo_nonfunctoriality, orbit_space,
                     verify_partial_functoriality)
from .report import Check, Report
from .rlview import (PosEnergyRep, f_bang, fht, i1_bang, irreducible, lw, lw_inverse, q_bang,
                     verify_fht_naturality, verify_naturality_k, verify_naturality_rl)
from .torus import (Kind, Level, MorphismDecomposition, Torus, TorusMorphism, decompose,
                    is_positive, product_level, pullback_level, split_level)
from .weyl import (CompactGroupData, GroupCharElement, GroupMorphismData, WeylGroup,
                   char_general, char_group, char_max_torus, check_decomposable, demo_u3,
                   group_basis, is_regular, rho_shift)
