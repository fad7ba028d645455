"""The p-v picture: 1-shock curve from the left state against the 3-wave
curve from the right state; they meet at the middle state."""
import numpy as np

from eulerfan.gas import GasModel, PrimState
from eulerfan.riemann1d import RiemannData, solve_middle, wave_curve

gas = GasModel(1.5)
left, right = PrimState(1.0, 0.0, 0.5, 1.0), PrimState(1.0, 0.0, 0.0, 2.0)
mid = solve_middle(RiemannData(gas, left, right))

p = np.geomspace(mid.p_M / 10, 10 * mid.p_M, 13)
v1 = np.array([left.v - wave_curve(gas, left.rho, left.p, x) for x in p])
v3 = np.array([right.v + wave_curve(gas, right.rho, right.p, x) for x in p])
print("      p     v_shock1    v_wave3")
for row in np.column_stack([p, v1, v3]):
    print("{:8.4f} {:10.5f} {:10.5f}".format(*row))
print(f"\ncurves cross at p_M = {mid.p_M:.10f}, v_M = {mid.v_M:+.10f}")
