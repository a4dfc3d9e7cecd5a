"""Build a few pairings and run every axiom check on them.

Run with ``python3 demos/01_pairings.py``.
"""

from demuskin_lab.constructions import make_p_local
from demuskin_lab.pairing import (
    Pairing,
    check_axiom_generation,
    check_axiom_involution,
    check_linkage,
    check_Mn,
    classify,
    is_quaternionic,
)


def report(name, P):
    print(f"{name}: p={P.p} dim H={P.h_dim} dim Q={P.q_dim} class={classify(P)}")
    print("  generation ", check_axiom_generation(P).status)
    print("  involution ", check_axiom_involution(P).status)
    if P.p == 2:
        print("  linkage    ", check_linkage(P).status)
    for n in (2, 3):
        v = check_Mn(P, n)
        extra = f"budget spent {v.budget_spent}" if v.is_inconclusive else v.detail
        print(f"  M({n})       {v.status} {extra}")


report("trivial", Pairing.trivial(3))
report("symplectic", make_p_local(3, 2))
report("nonorientable", make_p_local(2, 3, variant="nonorientable"))

# a table that breaks the involution axiom: gamma(e1, e2) != 0 but gamma(e2, e1) = 0
bad = Pairing.from_table(2, [[[0], [1]], [[0], [0]]])
v = check_axiom_involution(bad)
print("\nlopsided table:", v.status, "witness", v.witness)
print("quaternionic?", is_quaternionic(bad).status)
