"""Exact computations for the open-boundary exclusion process and its combinatorics."""

from .polycore import ComplexRational, ParamPoly, SitePoly, format_rational, parse_rational
from .markov import Distribution, asep_line_spec, gillespie, stationary_exact, stationary_partition
from .ansatz import ansatz_partition, bracket
from .combinatorics import ColoredPermutation, parse_permutation
from .trees import AltTree, tree_from_colored_permutation, tree_from_permutation
from .eulerian import asep_partition_perm, bracket_enum, excedance_polynomial, tree_partition

__version__ = "0.1.0"
