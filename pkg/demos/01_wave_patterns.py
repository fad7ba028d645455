"""Classify a handful of Riemann data and print the wave structure."""
import math

import numpy as np

from eulerfan.gas import GasModel, PrimState
from eulerfan.riemann1d import RiemannData, classify, evaluate_selfsimilar

gas = GasModel(1.5)

# left state (rho, u, v, p) against a right state at rest with p = 2
lefts = {
    "equal states": PrimState(1.0, 0.0, 0.0, 2.0),
    "shock onto p_+ (contact)": PrimState(1.0, 0.0, math.sqrt(1 / 3), 1.0),
    "shock + rarefaction": PrimState(1.0, 0.0, 0.5, 1.0),
    "two shocks": PrimState(1.0, 0.0, 2.0, 1.0),
    "two rarefactions": PrimState(1.0, 0.0, -1.0, 2.0),
}
right = PrimState(1.0, 0.0, 0.0, 2.0)

for name, left in lefts.items():
    data = RiemannData(gas, left, right)
    pat = classify(data)
    p_M = pat.middle.p_M if pat.middle else left.p
    print(f"{name:28s} row {pat.row:2d}  {pat.left_wave.value:>11s} | contact={pat.contact!s:5s} | "
          f"{pat.right_wave.value:<11s}  p_M = {p_M:.6f}")

# the self-similar profile of the shock + rarefaction case, sampled in xi = y/t
data = RiemannData(gas, lefts["shock + rarefaction"], right)
pat = classify(data)
xi = np.linspace(-2.5, 2.5, 11)
prof = np.array([evaluate_selfsimilar(data, pat, x).as_tuple() for x in xi])
print("\n   xi      rho       v        p")
for x, (rho, _, v, p) in zip(xi, prof):
    print(f"{x:6.2f} {rho:8.4f} {v:8.4f} {p:8.4f}")
