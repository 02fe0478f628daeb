"""p-parts of Jacobians up the Z_p-tower of a bouquet.

Level n of the tower over the bouquet of k loops (all voltages 1) is a cycle
of p^n vertices with k parallel edges per step. The p-part of its Jacobian
has order p^n (p^u)^(p^n - 1) where u is the p-adic valuation of k, so the
exponent is u p^n + n - u once n >= u.
"""
from graph_iwasawa import TowerSpec, bouquet, run_tower
from graph_iwasawa.tower import bouquet_closed_form

for k, p, N in [(2, 2, 5), (3, 2, 5), (6, 3, 3)]:
    spec = TowerSpec(bouquet(k), (1,) * k, p, N)
    result = run_tower(spec)
    print(f"B_{k}, p = {p}")
    for lv in result.levels:
        closed = bouquet_closed_form(p, k, lv.n)
        print(f"  n={lv.n}  e_n={lv.e_n:3d}  order={lv.order}  closed form={closed}  routes agree={lv.route_agree}")
    f = result.invariants
    print(f"  lambda={f.lam} mu={f.mu} nu={f.nu} (from n0={f.n0})\n")
