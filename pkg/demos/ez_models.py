"""Eilenberg-Zilber model chains: check the published ones, solve new ones.

Run with ``python3 demos/ez_models.py``.
"""

from controlled_chains.chains import diameter
from controlled_chains.ez_models import build_table, paper_model, paper_table, solve_model
from controlled_chains.simplicial import Delta, Product

table = paper_table(4)
print("published models verify:", table.verify() == [])
print("diameters:", table.diameters())

X = Product(Delta(2), Delta(2))
print("\nP_2(top x top) =")
for (a, b), c in sorted(paper_model(2).terms.items()):
    print(f"  {c:+d} {X.format_key((a, b))}")

# other solutions of the same equations
for method in ("cone", "linear"):
    t = build_table(3, method)
    print(f"\n{method:6s} table diameters:", t.diameters())

x = solve_model(2, "reduce", paper_table(1))
print("\nL1-reduced P_2 from the cone start has diameter", diameter(x))
