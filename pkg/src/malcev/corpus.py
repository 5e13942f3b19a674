"""Small reference models used by the tests, the demos and ``verify``."""
from __future__ import annotations

from .bar import CoefficientCoalgebra, DGAModel
from .groups import symmetric_group

__all__ = ["circle", "wedge", "circle_with_cell", "heisenberg", "torus", "circle_sigma2", "wedge_swap", "all_models"]


def circle() -> DGAModel:
    return DGAModel([("1", 0), ("w", 1)], "1", name="circle")


def wedge(k: int = 2) -> DGAModel:
    """Wedge of k circles: closed degree-1 classes with all products zero."""
    basis = [("1", 0)] + [(f"w{i}", 1) for i in range(1, k + 1)]
    return DGAModel(basis, "1", name=f"wedge{k}")


def circle_with_cell() -> DGAModel:
    """The circle model with an acyclic pair ``d b = a`` adjoined."""
    return DGAModel(
        [("1", 0), ("w", 1), ("b", 1), ("a", 2)],
        "1",
        differential={"b": {"a": 1}},
        name="circle+cell",
    )


def heisenberg() -> DGAModel:
    """Chevalley-Eilenberg complex of the Heisenberg Lie algebra (``dz = xy``)."""
    return DGAModel(
        [("1", 0), ("x", 1), ("y", 1), ("z", 1), ("xy", 2), ("xz", 2), ("yz", 2), ("xyz", 3)],
        "1",
        differential={"z": {"xy": 1}},
        product={
            ("x", "y"): {"xy": 1},
            ("x", "z"): {"xz": 1},
            ("y", "z"): {"yz": 1},
            ("x", "yz"): {"xyz": 1},
            ("y", "xz"): {"xyz": -1},
            ("z", "xy"): {"xyz": 1},
        },
        name="heisenberg",
    )


def torus() -> DGAModel:
    return DGAModel([("1", 0), ("x", 1), ("y", 1), ("xy", 2)], "1", product={("x", "y"): {"xy": 1}}, name="torus")


def circle_sigma2() -> tuple[DGAModel, CoefficientCoalgebra]:
    """Circle model with the two-element group acting trivially."""
    return circle(), CoefficientCoalgebra(symmetric_group(2), {})


def wedge_swap() -> tuple[DGAModel, CoefficientCoalgebra]:
    """Wedge of two circles with the two-element group swapping the classes."""
    S2 = symmetric_group(2)
    t = S2.elements[1]
    return wedge(2), CoefficientCoalgebra(S2, {t: {"w1": {"w2": 1}, "w2": {"w1": 1}}})


def all_models() -> list[DGAModel]:
    return [circle(), wedge(2), circle_with_cell(), heisenberg(), torus(), wedge(3)]
