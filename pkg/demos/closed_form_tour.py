"""Tour of the closed-form evaluators: eigenvalues, REE, and envelopes.

Walks from pure symmetric states to two-component mixtures, showing where
the mixture functional F is already convex and where the envelope has to
bridge a non-convex dip.
"""

import math

import numpy as np

from reekit import closedform as cf
from reekit.dicke import DickeIndex, DickeMixture, QuditComposition

print("== pure symmetric states ==")
for n, k in [(3, 2), (4, 1), (4, 2), (5, 2)]:
    idx = DickeIndex(n, k)
    lam = cf.lambda_max_dicke(idx)
    print(f"|S({n},{k})>: Lambda_max = {lam:.6f}, E_R = LR = E_log = {cf.pure_dicke_ree(idx):.6f} bits")

print("\nThe three-qubit W state |S(3,2)| has Lambda = 2/3 exactly:",
      math.isclose(cf.lambda_max_dicke(DickeIndex(3, 2)), 2 / 3))

print("\n== qudit symmetric states ==")
for counts in [(2, 0, 0, 1), (1, 1, 1, 0)]:
    c = QuditComposition(3, 4, counts)
    print(f"|S(3;{counts})>: Lambda^2 = {cf.lambda_max_qudit(c)**2:.6f}, E_R = {cf.pure_dicke_ree(c):.6f}")

print("\n== mixtures: convex F vs bridged envelopes ==")
for fam in [(2, 0, 1), (3, 0, 1), (3, 0, 2), (4, 0, 3)]:
    env = cf._two_component_envelope(*fam)
    if env.equals_curve:
        print(f"family {fam}: F convex, E_R = F everywhere")
    else:
        a, b, fa, fb = env.bridges[0]
        print(f"family {fam}: envelope bridges [{a:.4f}, {b:.4f}] "
              f"(E_R < F strictly inside)")

print("\nmid-curve values for the maximally entangled mixed state family:")
for s in np.linspace(0, 1, 6):
    print(f"  s = {s:.1f}: E_R = {cf.ree_two_component(2, 0, 1, float(s)):.6f} bits")

print("\n== closest separable states ==")
m = DickeMixture.two_component(4, 0, 3, 0.3)
sigma, info = cf.closest_separable_dicke(m)
print(f"rho[4;0,3](0.3) sits inside a bridge: method = {info['method']}")
for atom in info["atoms"]:
    print(f"  dephased atom at s = {atom['s']:.5f} with weight {atom['weight']:.5f}")
print(f"envelope value there: {info['value']:.6f} bits")
