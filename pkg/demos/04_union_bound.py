"""
The union bound over non-star families
======================================
"""

import numpy as np

from kneser_ekr.bounds import BoundConfig, sufficient_constants, union_bound_value
from kneser_ekr.kneser import kneser_params

P = kneser_params(5, 2)
v = union_bound_value(P, 0.99, BoundConfig(theta=1.0, xi=10.0))
print(v, 5 * (24 * 6.0**-10 + 90 * 3.0**-20))

# damping grows with xi
for xi in np.linspace(0, 20, 5):
    print(f"xi={xi:5.1f}  sum={union_bound_value(P, 0.99, BoundConfig(theta=1.0, xi=xi)):.3e}")

# with the default theta the sum is far from small at desk scale
for n, k in [(5, 2), (7, 3), (9, 4), (11, 5), (13, 6)]:
    p = kneser_params(n, k)
    print((n, k), f"{union_bound_value(p, 0.99, BoundConfig()):.3e}")

eps, C = sufficient_constants(0.05)
print("theta=0.05 needs epsilon <", eps, "and C >", C)
