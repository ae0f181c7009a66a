"""Default numerical tolerances, chosen at double-precision desk scale.

Every operation that depends on one of these accepts a keyword override,
so callers (and the CLI flags) can tighten or relax them per run.
"""

# Norm deviation accepted when validating a state or local vector.
TOL_NORM = 1e-10

# Below this norm a vector or projection outcome counts as zero.
TOL_ZERO = 1e-12

# Two unit vectors are linearly independent when their normalized overlap
# magnitude stays below 1 - TOL_INDEP.
TOL_INDEP = 1e-9

# Singular values above this count toward the Schmidt rank.
RANK_TOL = 1e-10

# Concurrence below this classifies a two-qubit residual as product.
PROD_TOL = 1e-9

# Smallest amplitude magnitude the basis fix must achieve; deliberately
# larger than TOL_ZERO so dependency tables never divide by near-zero weights.
AMP_FLOOR = 1e-9

# Concurrence at which a search candidate counts as a success; one order
# above PROD_TOL so the two classifiers never both fire.
SUCCESS_FLOOR = 1e-8
