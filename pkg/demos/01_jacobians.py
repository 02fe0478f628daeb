"""Jacobians of small graphs, computed two ways.

The vertex Jacobian is the cokernel of the reduced Laplacian; the edge
Jacobian is the cokernel of cycles plus stars in the edge lattice. Both
have order equal to the number of spanning trees.
"""
from graph_iwasawa import (complete_graph, edge_jacobian, enumerate_trees, laplacian_matrix,
                           two_bond_path, vertex_jacobian)

k4 = complete_graph(4)
print("Laplacian of K4:")
print(laplacian_matrix(k4))

# the reduced Laplacian has Smith form diag(1, 4, 4)
print("vertex Jacobian:", vertex_jacobian(k4))
print("edge Jacobian:  ", edge_jacobian(k4))

count, trees = enumerate_trees(k4, listing=True)
print(f"{count} spanning trees, e.g. edges {trees[0]} and {trees[-1]}")

# two vertices joined through a middle vertex by a and b parallel edges
print("\n a  b  order  trees")
for a in range(1, 4):
    for b in range(1, 4):
        g = two_bond_path(a, b)
        print(f"{a:2d} {b:2d} {vertex_jacobian(g).order:6d} {enumerate_trees(g):6d}")
