"""Random corestriction data and their trivial-plus-free splitting."""

from demuskin_lab import cohomology_sim as cs
from demuskin_lab.cp_modules import jordan_type

for p, x, y in [(2, 2, 1), (3, 1, 2), (5, 0, 2), (3, 3, 0)]:
    D = cs.generate(p, x, y, seed=11)
    problems = cs.validate(D)
    dec = cs.decompose(D)
    c1, c2, inside = cs.check_decomposition_conditions(D, dec.X, dec.Y)
    print(
        f"p={p} x={x} y={y}: dim M={D.M.dim} type={jordan_type(D.M)} valid={not problems}",
        f"dim X={dec.X.dim} dim Y={dec.Y.dim} conditions={c1, c2} cor(X) in A={inside}",
    )

# when W is a line and A fills it, M collapses to a single trivial line
D = cs.generate(3, 1, 0, seed=0)
print("\nw_dim=1, A=W:", "dim M =", D.M.dim)
