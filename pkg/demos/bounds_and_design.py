#!/usr/bin/env python3
"""Walk through one full design on the scalar benchmark plant.

The plant x(k+1) = 1.2 x(k) + w is unstable, so whoever stops hearing
measurements sees their estimation error explode. The sensor exploits that
asymmetry: it withholds each packet with probability 1-p, tuning p so the
intended receiver (link quality p1) stays bounded while the eavesdropper
(link quality p2) is pushed past its boundedness threshold.
"""

import numpy as np

from secest import (
    ChannelParams,
    ScalarSystem,
    critical_rates,
    design_p_star,
    secrecy_interval,
    solve_S,
    solve_V,
)

s = ScalarSystem(a=1.2, c=1.0, q=1.0, r=1.0)
sys = s.to_linear()
ch = ChannelParams(p1=0.9, p2=0.6)

print("plant: x' = 1.2 x + w, y = x + v, q = r = 1")
print(f"channel: user p1 = {ch.p1}, eavesdropper p2 = {ch.p2}")

rates = critical_rates(sys)
print(f"\ncritical reception rate bracket: [{rates.p_lower:.9f}, {rates.p_upper:.9f}]")
print(f"exact (scalar plants close the bracket): {rates.exact}")

iv = secrecy_interval(sys, ch)
print(f"\nsecrecy interval for p: ({iv.lower_exclusive:.5f}, {iv.upper_inclusive:.5f}]")
print("any p in that range keeps the user bounded and the eavesdropper unbounded")

print("\n p      Tr S(p) [eavesdropper floor]   Tr V(p) [user ceiling]")
for p in np.linspace(0.30, 1.0, 8):
    S = solve_S(float(p), ch, sys)
    V = solve_V(float(p), ch, sys)
    print(f" {p:.2f}   {S.trace:>12.4f}                  {V.trace:>12.4f}")

# Now the constrained design: force the eavesdropper floor to at least M
# while keeping the user ceiling as small as possible.
M = 10.0
res = design_p_star(sys, ch, M)
print(f"\ndesign for floor target M = {M}:")
print(f"  p* = {res.p_star:.6f}   ({res.iterations} bisection steps)")
print(f"  Tr S(p*) = {res.trS_at_p_star:.6f}  (>= M by construction)")
print(f"  Tr V(p*) = {res.trV_at_p_star:.6f}  (price paid by the user)")
