"""The tower homotopies Phi^n for Z/2, checked through permutation witnesses.

Tower words are only normal forms in a free product, so identities are
decided after mapping into a concrete finite mitosis.  Depth two is a
permutation group on 576 points.
"""

import random

from controlled_chains.chains import diameter
from controlled_chains.groups import CyclicGroup, build_tower
from controlled_chains.homotopies import PhiTower, delta_bdh, delta_bdh_corrected, verify_phi
from controlled_chains.simplicial import BarComplex

Z2 = CyclicGroup(2)
tower = build_tower(Z2, 2)
print("witness levels valid:", bool(tower.validate()), "| top degree:", tower.top.degree)

phis = PhiTower(Z2, 3)
for n in (1, 2):
    rep = verify_phi(Z2, n, tower, phis=phis)
    print(f"Phi^{n}: identity {'holds' if rep.ok else 'FAILS'} on {rep.checked} simplices, diameters {rep.diameters}")

# depth three has no finite witness here, so only diameters are measured
B = BarComplex(Z2)
rng = random.Random(0)
print("\nk  max d(Phi^3)  published  shuffle in degree k+1")
for k in range(4):
    d = max(diameter(phis[3](B.random_simplex(k, rng))) for _ in range(100))
    print(f"{k}  {d:12d}  {delta_bdh(k):9d}  {delta_bdh_corrected(k):9d}")
