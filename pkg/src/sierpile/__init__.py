"""
sierpile: exact computations for the Abelian sandpile model and uniform
spanning forests on Sierpinski gasket graphs SG_n.

Modules
-------
gasket        graph construction, addressing, symmetries, sink contraction
sandpile      stabilization, recurrence, group, Markov chain, burning bijection
census        spanning forest counts (tau, sigma, rho) and decomposition tables
transfer      exact transfer recursion for per-vertex descendant laws
heights       descendant / height probabilities per vertex
expectations  expected height counts, looping constant, density limits
oracle        exhaustive enumeration, Kirchhoff counts, Wilson / LERW samplers
verify        verification suites used by the command line
"""

from .errors import CapacityError, ContractViolation, DomainError
from .gasket import VertexAddr, build_graph, contract_sinks, parse_sinks
from .sandpile import (SandpileConfig, identity_element, is_recurrent, recurrent_configs,
                       run_chain, sandpile_to_tree, stabilize, tree_to_sandpile)
from .census import counts_closed, counts_recursive
from .heights import corner_probs, cutpoint_probs, desc_to_height, root_probs, vertex_probs
from .expectations import expected_desc, expected_heights, limit_report, looping_constant, looping_limit
from .oracle import enumerate_forests, kirchhoff_count, lerw, mc_looping_constant, wilson_sample

__version__ = "0.1.0"
