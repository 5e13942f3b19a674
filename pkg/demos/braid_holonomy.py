"""KZ holonomy of braids in the Drinfeld-Kohno algebra.

Shows the full twist in B2, the braid relation in B3, and how the degree-one
part of the holonomy of a pure braid recovers the pairwise linking numbers.
"""
import math

from malcev.braid_kz import BraidWord, braid_holonomy, drinfeld_kohno, linking_numbers, pure_braid_degree_one
from malcev.envelope import COMPLEX, exp

for n, N in ((3, 4), (4, 3)):
    print(f"p_{n} truncated at degree {N}: dims {drinfeld_kohno(n, N).dims()}")

twist = braid_holonomy(BraidWord.parse(2, "s1 s1"), 3)
closed = exp(twist.u.algebra.from_lie({0: 2j * math.pi}, COMPLEX))
print(f"\nfull twist vs exp(2 pi i X12): {twist.u.distance(closed):.1e}")

a = braid_holonomy(BraidWord.parse(3, "s1 s2 s1"), 3)
b = braid_holonomy(BraidWord.parse(3, "s2 s1 s2"), 3)
print(f"s1 s2 s1 vs s2 s1 s2: {a.distance(b):.1e}, permutation {tuple(p + 1 for p in a.s)}")

word = BraidWord.parse(3, "s2 s1 s1 s2^-1 s2 s2")
el = braid_holonomy(word, 2)
labels = el.u.algebra.lie.labels
print(f"\npure braid {word}")
for i, c in sorted(pure_braid_degree_one(el).items()):
    print(f"  {labels[i]}: {(c / (2j * math.pi)).real:+.6f}")
print("  linking numbers", {f"{a}{b}": str(v) for (a, b), v in sorted(linking_numbers(word).items())})
