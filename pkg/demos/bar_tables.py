"""H0 of the bar construction for the small reference models.

Prints the new-cocycle dimensions per bar degree, then the indecomposables
of the wedge of two circles and the dimensions of their dual Lie algebra.
"""
from malcev import corpus
from malcev.bar import h0, indecomposables_and_cobracket

for model in corpus.all_models():
    res = h0(model, bar_degree_cap=4)
    print(f"{model.name:12s} new {tuple(res.report.new_dims)} cumulative {tuple(res.report.cumulative)}")

model, coal = corpus.wedge_swap()
res = h0(model, coal, 3)
print(f"\nwedge with the swap action, O(S2) coefficients: {tuple(res.report.new_dims)}")
print(f"trivial-coefficient part {tuple(res.trivial_report.new_dims)}, tensor decomposition {res.tensor_decomposition_ok}")

data = indecomposables_and_cobracket(h0(corpus.wedge(2), bar_degree_cap=3), 3)
print(f"\nwedge indecomposables by degree {data.graded_dims()}")
print(f"dual Lie algebra dims {data.dual_lie().dims()} (free Lie algebra on two generators)")
