"""Composite certificates for the three one-shock cases."""
import math

from eulerfan.gas import GasModel, PrimState
from eulerfan.patching import assemble, galilean_shift, reflect
from eulerfan.riemann1d import RiemannData

gas = GasModel(1.5)
right = PrimState(1.0, 0.0, 0.0, 2.0)
cases = {
    "inside the window": PrimState(1.0, 0.0, math.sqrt(0.97 / 3), 1.0),
    "below the window": PrimState(1.0, 0.0, 0.5, 1.0),
    "pure shock + contact": PrimState(1.0, 0.0, math.sqrt(1 / 3), 1.0),
}

for name, left in cases.items():
    data = RiemannData(gas, left, right)
    ps = assemble(data)
    print(f"{name}: {ps.case_id.value}, delta = {ps.delta:.3g}, verified = {ps.verified}")
    if ps.aux_state is not None:
        a = ps.aux_state
        print(f"   aux state rho = {a.rho:.5f}, v = {a.v:+.5f}, p = {a.p:.5f}; "
              f"{ps.trailing_wave.kind.value} trailing wave, compatibility {ps.compatibility:.4f}")
    for label, x in ps.interfaces("original"):
        print(f"   {label:9s} {x:+.5f}")

# the same certificate for mirrored, moving data
data = galilean_shift(reflect(RiemannData(gas, cases["below the window"], right)), (0.5, -1.0))
ps = assemble(data)
print(f"\nmirrored and shifted: {ps.case_id.value}, reflected = {ps.normalization.reflected}, "
      f"verified = {ps.verified}")
print("interfaces:", ", ".join(f"{k}={x:+.4f}" for k, x in ps.interfaces("original")))
