"""Spectral analysis of convex monotone additively homogeneous maps.

Eigenvalues and eigenvectors, critical graphs and classes, cyclicity,
spectral projectors, periodic orbits and, for piecewise-affine maps, the
eigenspace as a union of rational polyhedra.
"""
from .critical import (CriticalData, InvalidEigenpair, critical_data, final_graph_of_rect,
                       invariant_critical_classes, section, witness_matrix)
from .graphs import DiGraph, cyclicity, final_classes, graph_power, strong_components, to_dot
from .markov import final_classes_of_matrix, final_graph, invariant_measure, mean_reward
from .maxplus import (load_maxplus, maxplus_critical, maxplus_eigen, maxplus_rho, maxplus_to_model,
                      saturation_graph)
from .mdp import (DeterministicPolicy, MdpModel, RandomizedStationaryPolicy, brute_force_lambda, load_mdp,
                  mdp_to_map, optimal_class_check, policy_analysis)
from .model import (CapExceeded, Generator, LogSumExp, MapModel, MaxAffine, ModelError, additive_recession,
                    compose, directional_derivative, evaluate, graph_of_map, iterate, lift_subhomogeneous,
                    load_model, max_affine, multiplicative_recession, power, restrict, subdiff_generators,
                    validate_model)
from .polyhedra import (PolicySelection, RationalPolyhedron, affine_dimension, eigenspace_dimension,
                        eigenspace_enumerate, eigenspace_membership, lp_feasible)
from .spectral import (EigenResult, NotConverged, OrbitResult, eigenvalue_bounds, find_eigenvector,
                       lattice_join, lattice_meet, periodic_limit, spectral_projector, verify_eigenpair)

__version__ = "0.1.0"
