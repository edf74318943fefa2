"""Counting invariants for number-field asymptotics over Q.

Modules:
  perm         exact permutation groups and the index class function
  twist        conjugator/unit twisted actions and Burnside counting
  invariants   a, twisted b, plain b, modified B, lower-bound exponents
  localfactors tame cocycle enumeration and Euler factor polynomials
  dirichlet    Frobenian families, exact expansion, Tauberian predictions
  selmer       cyclic posets, pairings, ratio formula, condition families
  counting     empirical hom counts over Q by conductor machinery
  catalog      worked groups and twist presets
  kernels      compiled/pure hot-loop backends
  cli          command-line front end
"""

from .abgroup import FiniteAbelianGroup, parse_abelian
from .catalog import get as catalog_get
from .invariants import (InvariantReport, a_invariant, b_malle, b_twisted,
                         lower_bound_exponents, minimal_index_set, turkelli_B)
from .localfactors import EulerFactor, LocalClass, euler_factor, z1_enumerate
from .perm import PermGroup, Permutation, ind, orbit_count
from .twist import ActionPair, TwistGroup

__version__ = "0.1.0"

__all__ = [
    "ActionPair", "EulerFactor", "FiniteAbelianGroup", "InvariantReport",
    "LocalClass", "PermGroup", "Permutation", "TwistGroup", "a_invariant",
    "b_malle", "b_twisted", "catalog_get", "euler_factor", "ind",
    "lower_bound_exponents", "minimal_index_set", "orbit_count",
    "parse_abelian", "turkelli_B", "z1_enumerate", "__version__",
]
