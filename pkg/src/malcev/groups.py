"""Finite groups given by multiplication tables."""
from __future__ import annotations

from itertools import permutations
from typing import Hashable, Sequence

__all__ = ["FiniteGroup", "symmetric_group", "cyclic_group", "compose", "perm_inverse"]


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``(p q)(i) = p(q(i))`` for permutations of ``range(n)``."""
    return tuple(p[q[i]] for i in range(len(q)))


def perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class FiniteGroup:
    """A finite group on arbitrary hashable element labels."""

    def __init__(self, elements: Sequence[Hashable], table: dict, identity: Hashable, name: str = ""):
        self.elements = tuple(elements)
        self.order = len(self.elements)
        self._table = dict(table)
        self.identity = identity
        self.name = name or f"G{self.order}"
        self._position = {g: k for k, g in enumerate(self.elements)}
        if identity not in self._position:
            raise ValueError("identity is not an element")
        self._inverse = {}
        for g in self.elements:
            for h in self.elements:
                if self.mul(g, h) == identity:
                    self._inverse[g] = h
                    break
            else:
                raise ValueError(f"{g!r} has no inverse")

    @classmethod
    def from_table(cls, labels: Sequence[Hashable], rows: Sequence[Sequence[Hashable]], name: str = ""):
        """``rows[i][j]`` is ``labels[i] * labels[j]``; identity is detected."""
        table = {(a, b): rows[i][j] for i, a in enumerate(labels) for j, b in enumerate(labels)}
        ident = None
        for a in labels:
            if all(table[a, b] == b for b in labels):
                ident = a
                break
        if ident is None:
            raise ValueError("multiplication table has no identity")
        return cls(labels, table, ident, name)

    def mul(self, g, h):
        try:
            return self._table[g, h]
        except KeyError:
            raise KeyError(f"({g!r}, {h!r}) is not in the multiplication table") from None

    def inv(self, g):
        return self._inverse[g]

    def position(self, g) -> int:
        return self._position[g]

    def product(self, *gs):
        out = self.identity
        for g in gs:
            out = self.mul(out, g)
        return out

    def validate(self) -> list[str]:
        problems = []
        els = self.elements
        for g in els:
            for h in els:
                if self.mul(g, h) not in self._position:
                    problems.append(f"{g!r}*{h!r} is not an element")
        for g in els:
            if self.mul(g, self.identity) != g or self.mul(self.identity, g) != g:
                problems.append(f"identity law fails at {g!r}")
        for g in els:
            for h in els:
                gh = self.mul(g, h)
                for k in els:
                    if self.mul(gh, k) != self.mul(g, self.mul(h, k)):
                        problems.append(f"associativity fails at ({g!r},{h!r},{k!r})")
        return problems

    def conjugacy_classes(self) -> list[list]:
        seen, classes = set(), []
        for g in self.elements:
            if g in seen:
                continue
            cls = sorted({self.mul(self.mul(h, g), self.inv(h)) for h in self.elements}, key=self.position)
            seen.update(cls)
            classes.append(cls)
        return classes

    def __contains__(self, g) -> bool:
        return g in self._position

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` as tuples, composed right to left."""
    els = sorted(permutations(range(n)))
    table = {(p, q): compose(p, q) for p in els for q in els}
    return FiniteGroup(els, table, tuple(range(n)), name=f"S{n}")


def cyclic_group(n: int) -> FiniteGroup:
    els = list(range(n))
    table = {(a, b): (a + b) % n for a in els for b in els}
    return FiniteGroup(els, table, 0, name=f"C{n}")
