"""Exact graph Jacobians, voltage covers and Iwasawa invariants of Z_p-towers."""
from .algebra import (AbelianGroupStructure, GroupRingMatrix, SmithDecomposition, cokernel_structure,
                      flatten_group_ring, int_matrix, kernel_basis, p_part, smith_normal_form)
from .covers import (DerivedGraph, VoltageAssignment, connectivity_criterion, count_lifted_trees, derive,
                     enumerate_trees, galois_action, intermediate_cover, pushforward_cokernel)
from .errors import (CapExceeded, Disconnected, GraphIwasawaError, InfiniteGroup, InsufficientLevels,
                     NotACover, NotConnected, TooLarge)
from .graph import (Graph, GraphMorphism, Path, bouquet, check_covering, complete_graph, find_path,
                    is_connected, spanning_tree, two_bond_path, validate)
from .jacobian import (boundary_matrix, edge_jacobian, homology_basis, jacobian_report, laplacian_matrix,
                       star_matrix, vertex_jacobian)
from .tower import (IwasawaInvariants, TowerLevelReport, TowerSpec, build_level, delta_zero,
                    fit_invariants, j_module_structure, p_primary_jacobian_direct,
                    p_primary_jacobian_via_module, run_tower, twisted_boundary, twisted_star)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupStructure",
    "GroupRingMatrix",
    "SmithDecomposition",
    "cokernel_structure",
    "flatten_group_ring",
    "int_matrix",
    "kernel_basis",
    "p_part",
    "smith_normal_form",
    "DerivedGraph",
    "VoltageAssignment",
    "connectivity_criterion",
    "count_lifted_trees",
    "derive",
    "enumerate_trees",
    "galois_action",
    "intermediate_cover",
    "pushforward_cokernel",
    "CapExceeded",
    "Disconnected",
    "GraphIwasawaError",
    "InfiniteGroup",
    "InsufficientLevels",
    "NotACover",
    "NotConnected",
    "TooLarge",
    "Graph",
    "GraphMorphism",
    "Path",
    "bouquet",
    "check_covering",
    "complete_graph",
    "find_path",
    "is_connected",
    "spanning_tree",
    "two_bond_path",
    "validate",
    "boundary_matrix",
    "edge_jacobian",
    "homology_basis",
    "jacobian_report",
    "laplacian_matrix",
    "star_matrix",
    "vertex_jacobian",
    "IwasawaInvariants",
    "TowerLevelReport",
    "TowerSpec",
    "build_level",
    "delta_zero",
    "fit_invariants",
    "j_module_structure",
    "p_primary_jacobian_direct",
    "p_primary_jacobian_via_module",
    "run_tower",
    "twisted_boundary",
    "twisted_star",
]
