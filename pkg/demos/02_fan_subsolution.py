"""Search for a fan subsolution across the smallness window.

For c_v = 3/2, p_- = 1, p_+ = 2 the window for rho_- v_-**2 ends at 1/3.
The ladder only succeeds above an empirical threshold close to that edge.
"""
import math

import numpy as np

from eulerfan.gas import GasModel, PrimState
from eulerfan.riemann1d import RiemannData
from eulerfan.subsolution import NotFoundError, estimate_threshold, find, smallness_upper

gas = GasModel(1.5)
upper = smallness_upper(gas, 1.0, 2.0)
window = estimate_threshold(gas, 1.0, 1.0, 2.0)
print(f"upper edge {upper:.6f}, empirical threshold {window.v_est:.6f} "
      f"({window.v_est / upper:.4f} of the edge, {window.evaluations} searches)")

for frac in np.linspace(0.90, 0.999, 8):
    data = RiemannData(gas, PrimState(1.0, 0.0, math.sqrt(frac * upper), 1.0), PrimState(1.0, 0.0, 0.0, 2.0))
    try:
        sub = find(data)
    except NotFoundError as err:
        print(f"{frac:.4f}: not found (best smallest slack {err.best['min_slack']:+.2e})")
        continue
    rep = sub.report
    print(f"{frac:.4f}: h = {sub.h:.2e}  rho_1 = {sub.rho1:.5f}  rho_2 = {sub.rho2:.5f}  "
          f"mu = ({sub.mu0:+.4f}, {sub.mu1:+.4f}, 0)  min margin {rep.min_margin:.2e}  "
          f"max residual {rep.max_eq_residual:.1e}")

print("\nfull condition list of the last verified fan:")
for c in rep.conditions:
    print(f"  {c.id:22s} {c.kind:6s} {c.value:+.3e}")
