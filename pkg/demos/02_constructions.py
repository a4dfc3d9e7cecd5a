"""Direct products, extensions, and the tree sweep."""

from demuskin_lab.constructions import (
    Extension,
    Leaf,
    Product,
    build,
    enumerate_trees,
    is_elementary_type_bounded,
    make_p_local,
    pairings_isomorphic,
    verify_strongly_regular_weakly_local,
)
from demuskin_lab.pairing import Pairing, classify

p = 3
tree = Extension(Product(Leaf("trivial"), Leaf("p_local", 2)), 1)
P = build(tree, p)
print("tree", tree.to_json())
print(f"built pairing: dim H={P.h_dim}, dim Q={P.q_dim}, predicted dims {tree.dims()}, class {classify(P)}")

# the symplectic pairing on F_3^2 is an extension of the trivial one
v = pairings_isomorphic(make_p_local(p, 2), build(Extension(Leaf("trivial"), 2), p))
print("symplectic ~ Ext(trivial, 2):", v.status)
print("  map on H:", v.witness["f"])

print("elementary type:", is_elementary_type_bounded(P).status)

trees = enumerate_trees(2, 2, 5, p)
v = verify_strongly_regular_weakly_local(trees, p)
print(f"\n{len(trees)} trees of depth <= 2: {v.status} {v.detail}")
print("trivial pairing on F_3^0:", classify(Pairing.trivial(p)))
