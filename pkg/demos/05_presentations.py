"""Index-p subgroups of one-relator pro-p groups via Reidemeister-Schreier."""

from demuskin_lab.cp_modules import jordan_type
from demuskin_lab.propp import (
    d_of_subgroup,
    demuskin_presentation,
    enumerate_index_p,
    free_presentation,
    h1_module,
    reidemeister_schreier,
    verify_h1_shapes,
    verify_rank_formula,
)

for name, pres in [
    ("surface genus 2, p=2", demuskin_presentation(2, "surface", genus=2)),
    ("x^3 [x,y], p=3", demuskin_presentation(3, "one_relator_q", q=3)),
    ("free of rank 2, p=2", free_presentation(2, 2)),
]:
    print(name)
    for N in enumerate_index_p(pres)[:3]:
        SN = reidemeister_schreier(pres, N)
        print(f"  phi={list(N.phi)}: {SN.num_gens} gens, {len(SN.relators)} relators, d(N)={d_of_subgroup(SN)},",
              f"H^1 type {jordan_type(h1_module(pres, N))}")
    print("  rank formula:", verify_rank_formula(pres).status, " H^1 shapes:", verify_h1_shapes(pres).status)
