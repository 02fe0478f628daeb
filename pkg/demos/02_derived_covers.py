"""A Z/4 cover of the bouquet of two loops and its subcover.

Both loops get voltage 1, so the derived graph is a 4-cycle with doubled
edges. The deck group acts by rotation and the pushforward on homology has
cokernel Z/4.
"""
from graph_iwasawa import (VoltageAssignment, bouquet, count_lifted_trees, derive, galois_action,
                           homology_basis, intermediate_cover, pushforward_cokernel, vertex_jacobian)

va = VoltageAssignment(bouquet(2), (1, 1))
cover = derive(va, 4)
g = cover.graph
for k, (o, t) in enumerate(g.edges):
    print(f"{g.edge_labels[k]:>6}: {g.vertex_labels[o]} -> {g.vertex_labels[t]}")

print("connected:", cover.connected)
print("rank H1 of the cover:", len(homology_basis(g)))
print("coker of pushforward:", pushforward_cokernel(cover.projection))
print("Jacobian of the cover:", vertex_jacobian(g))

rot = galois_action(cover, 1)
print("generator of the deck group on vertices:", rot.vertex_map)

lower, phi = intermediate_cover(va, 4, 2)
print("Z/2 subcover coker:", pushforward_cokernel(lower.projection))
print("Z/4 -> Z/2 coker:  ", pushforward_cokernel(phi))

# one spanning tree of the bouquet (the empty one), four lifts
print("lifted spanning trees:", count_lifted_trees(cover.projection))
