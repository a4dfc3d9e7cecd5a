"""Jordan types of C_p-modules and the fixed/norm comparison."""

import numpy as np

from demuskin_lab.cp_modules import (
    CpModule,
    check_fixednorm_identity,
    free_rank,
    is_trivial_plus_free,
    jordan_type,
    maximal_free_submodule,
)
from demuskin_lab.fp_linalg import random_invertible

rng = np.random.default_rng(0)
for p, parts in [(3, [1, 3, 3]), (3, [1, 2, 3]), (5, [5, 1, 1]), (2, [2, 2, 1])]:
    M = CpModule.from_jordan_type(p, parts).conjugate(random_invertible(p, sum(parts), rng))
    print(
        f"p={p} hidden {parts}: recovered {jordan_type(M)}",
        f"trivial+free={is_trivial_plus_free(M)}",
        f"fixed/norm identity={check_fixednorm_identity(M)}",
        f"free rank={free_rank(M)}",
    )

M = CpModule.from_jordan_type(3, [3, 3, 2])
F = maximal_free_submodule(M)
print("\nmaximal free submodule of [3,3,2] has dim", F.span.dim, "with", len(F.generators), "generators")
