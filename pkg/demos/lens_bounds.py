"""rho-invariants of L(n,1) against the universal complexity bounds."""

from controlled_chains.bounds import complexity_lower_bounds, constant_chain, lens_rho, rho_bound, sawtooth_rho

for label, got, want in constant_chain():
    print(f"{label:16s} = {got}")

print("\n n   rho(L(n,1))  sawtooth")
for n in (1, 2, 3, 5, 10, 50):
    print(f"{n:3d}  {str(lens_rho(n)):11s}  {sawtooth_rho(n)}")

r = complexity_lower_bounds(10**12)
print("\nL(10^12,1): complexity >=", float(r["lens_lower"]), "<= upper", r["lens_upper"])

# 8-crossing writhe-zero diagram with zero framing
print("general surgery bound:", rho_bound(surgery_crossings=8, framings=[0]).value)
print("blackboard bound:     ", rho_bound(blackboard=8).value)
