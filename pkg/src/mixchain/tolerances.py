"""Numeric tolerances and caps used across the package.

All computation is double precision; the problem sizes are tiny (m <= 6 in
practice) and well conditioned, so fixed absolute tolerances are adequate.
"""

# Row sums of a transition matrix must be within this of 1 to be admitted
# (rows inside the band are renormalized exactly).
ROW_TOL = 1e-9

# Probability vectors and pmf normalization checks.
PROB_TOL = 1e-10

# Matrix identities: fundamental-matrix residual, mean-passage cross-checks,
# Kemeny trace comparisons.
MAT_TOL = 1e-9

# Coefficient-wise polynomial / power-series identities.
SERIES_TOL = 1e-10

# Agreement required between independent first-passage computation routes.
XCHECK_TOL = 1e-9

# Adaptive truncation: stop once the unaccumulated tail is below TAIL_TOL,
# never exceeding N_CAP steps.
TAIL_TOL = 1e-9
N_CAP = 10_000

# Repeated-root threshold separating distinct-root closed forms from the
# confluent branch; below this scale the difference quotient
# (lam_a**n - lam_b**n)/(lam_a - lam_b) loses all precision.
DELTA_TOL = 1e-8
