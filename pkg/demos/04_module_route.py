"""The finite-level module J(n) on a less symmetric base.

J(n) is the edge lattice of level n modulo stars and the cycles of total
voltage zero. It has free rank one; killing the norm of the level-one path
delta_0 leaves exactly the p-part of the level-n Jacobian.
"""
from graph_iwasawa import (TowerSpec, delta_zero, j_module_structure, p_primary_jacobian_direct,
                           p_primary_jacobian_via_module, twisted_boundary, twisted_star)
from graph_iwasawa.graph import Graph

# a triangle with a loop at vertex 0
base = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2), (0, 0)])
spec = TowerSpec(base, (1, 0, 0, 2), 2, 4)

print("twisted boundary at n = 2:")
print(twisted_boundary(spec, 2))
print("twisted star at n = 2:")
print(twisted_star(spec, 2))

d0 = delta_zero(spec)
print("delta_0 as a base chain:", d0.edge_chain(base))

for n in range(spec.max_level + 1):
    j = j_module_structure(spec, n)
    via = p_primary_jacobian_via_module(spec, n)
    direct = p_primary_jacobian_direct(spec, n)
    print(f"n={n}: J(n) = {j};  J(n)/<N delta_0> = {via};  direct = {direct}")
