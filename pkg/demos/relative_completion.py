"""A toy relative completion over the symmetric group.

Checks the Peter-Weyl decomposition of O(S_n) for small n, then splits the
first homology of the circle with O(S2) coefficients into isotypic parts.
"""
from malcev import corpus
from malcev.relcomp import isotypic_dims_h1, peter_weyl_check, young_irreps

for n in (2, 3, 4):
    irreps = young_irreps(n)
    rep = peter_weyl_check(irreps[0].group, irreps)
    dims = [r.dim for r in irreps]
    print(f"S{n}: irreps of dims {dims}, sum of squares {rep.sum_of_squares}, entry rank {rep.entry_rank}")

for name in ("circle_sigma2", "wedge_swap"):
    model, coal = getattr(corpus, name)()
    irreps = young_irreps(2)
    print(f"{name}: H1 isotypic dims {isotypic_dims_h1(model, coal, irreps)}")
