"""
Eigenvalues of Johnson graphs
=============================

J_i(m,k) joins two k-sets whose symmetric difference has size 2i.
The eigenvalues come from a closed-form alternating sum; we compare
them with a dense Jacobi solve.
"""

import numpy as np

from kneser_ekr.johnson import (
    JohnsonGraph, dense_spectrum_oracle, formula_spectrum, laplacian_gap_formula,
    laplacian_gap_numeric, spectrum_report,
)

# the octahedron J_1(4,2)
print(JohnsonGraph(4, 2, 1).adjacency_matrix())
print("formula :", formula_spectrum(4, 2, 1))
print("jacobi  :", np.round(dense_spectrum_oracle(4, 2, 1), 10))

rep = spectrum_report(8, 3, 2)
for j, (lam, mult) in enumerate(zip(rep.formula_eigenvalues, rep.multiplicities)):
    print(f"j={j}  lambda={lam:>4}  multiplicity={mult:>3}  residual={rep.residuals[j]:.1e}")

# the closed-form gap is only claimed when k > 6c; outside that regime
# the second-largest eigenvalue need not be lambda_1
for m, k, c in [(4, 2, 1), (5, 2, 2), (8, 4, 2)]:
    g = laplacian_gap_formula(m, k, c)
    print((m, k, c), "formula", g.value, "numeric", round(laplacian_gap_numeric(m, k, c), 9),
          "proven" if g.proven_regime else "outside regime")

print("J_1(20,7):", laplacian_gap_formula(20, 7, 1))
