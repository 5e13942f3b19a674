"""Chen iterated integrals and parallel transport along piecewise paths.

Paths live in C^n. Each segment is parametrized by [0, 1]; a piecewise path
runs through its segments in order. Forms are evaluated on ``(x, x')`` so
that the pull-back along a segment is ``f(t) dt``.

Transport solves the row equation ``T' = T A(t)`` with ``A(t)`` the right
multiplication by ``omega(x'(t))`` in the truncated enveloping algebra. The
same solver computes scalar iterated integrals through the nilpotent
system ``I_k' = I_{k-1} f_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .envelope import COMPLEX, Envelope, TruncatedSeries
from .free_lie import GradedNilpotentLie
from .groups import FiniteGroup

__all__ = [
    "TransportError",
    "SingularityError",
    "CoordinateMap",
    "PolynomialSegment",
    "ArcSegment",
    "ArcMove",
    "PiecewisePath",
    "DlogForm",
    "PolyForm",
    "LieValuedOneForm",
    "TransportResult",
    "CoveringSpace",
    "IntegrabilityResult",
    "iterated_integral",
    "prefix_integrals",
    "transport",
    "check_integrability",
    "iterated_integral_with_coeff",
    "monodromy",
    "random_polynomial_path",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
SINGULAR_FRACTION = 1e-6
CONTINUITY_TOL = 1e-12
MIN_STEP = 1e-12
ITERATED_FLOOR = 1e-3


class TransportError(RuntimeError):
    """The integrator could not reach the requested tolerance."""


class SingularityError(TransportError):
    """A node of the integration came too close to a polar divisor."""


# -- coordinate maps ------------------------------------------------------------


@dataclass(frozen=True)
class CoordinateMap:
    """``y_k = scales[k] * x_{perm^{-1}(k)}``: a scaled coordinate permutation."""

    perm: tuple[int, ...]
    scales: tuple[complex, ...] | None = None

    @property
    def dimension(self) -> int:
        return len(self.perm)

    def scale(self, k: int) -> complex:
        return 1.0 if self.scales is None else self.scales[k]

    def apply(self, x: Sequence[complex]) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        y = np.empty_like(x)
        for j, k in enumerate(self.perm):
            y[k] = self.scale(k) * x[j]
        return y

    def compose(self, other: "CoordinateMap") -> "CoordinateMap":
        """``self o other``."""
        n = self.dimension
        perm = tuple(self.perm[other.perm[j]] for j in range(n))
        scales = []
        for k in range(n):
            j = self.perm.index(k)  # x_j of the intermediate point
            scales.append(self.scale(k) * other.scale(j))
        return CoordinateMap(perm, tuple(scales))

    def is_close(self, other: "CoordinateMap", tol: float = 1e-12) -> bool:
        return self.perm == other.perm and all(abs(self.scale(k) - other.scale(k)) <= tol for k in range(self.dimension))


# -- segments -------------------------------------------------------------


class PolynomialSegment:
    """``x_k(t) = sum_j coeffs[k][j] t^j`` for t in [0, 1]."""

    kind = "polynomial"

    def __init__(self, coeffs: Sequence[Sequence[complex]]):
        self.coeffs = [np.array(c if len(c) else [0.0], dtype=complex) for c in coeffs]
        width = max(len(c) for c in self.coeffs)
        self._C = np.zeros((len(self.coeffs), width), dtype=complex)
        for k, c in enumerate(self.coeffs):
            self._C[k, : len(c)] = c
        self._D = self._C[:, 1:] * np.arange(1, width)
        self._powers = np.arange(width)

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @classmethod
    def line(cls, a: Sequence[complex], b: Sequence[complex]) -> "PolynomialSegment":
        return cls([[complex(p), complex(q) - complex(p)] for p, q in zip(a, b)])

    @classmethod
    def constant(cls, a: Sequence[complex]) -> "PolynomialSegment":
        return cls([[complex(p)] for p in a])

    def position(self, t: float) -> np.ndarray:
        return self._C @ (float(t) ** self._powers)

    def velocity(self, t: float) -> np.ndarray:
        return self._D @ (float(t) ** self._powers[:-1])

    def reversed(self) -> "PolynomialSegment":
        return PolynomialSegment([_compose_poly(c, [1.0, -1.0]) for c in self.coeffs])

    def reparametrized(self, poly: Sequence[float]) -> "PolynomialSegment":
        """Precompose with ``t -> sum poly[j] t^j`` (an increasing map of [0, 1])."""
        return PolynomialSegment([_compose_poly(c, poly) for c in self.coeffs])

    def transformed(self, cmap: CoordinateMap) -> "PolynomialSegment":
        out = [None] * self.dimension
        for j, k in enumerate(cmap.perm):
            out[k] = self.coeffs[j] * cmap.scale(k)
        return PolynomialSegment(out)

    def __repr__(self):
        return f"PolynomialSegment(dim={self.dimension})"


def _compose_poly(c: np.ndarray, p: Sequence[float]) -> np.ndarray:
    """Coefficients of ``c(p(t))`` by Horner's rule."""
    P = np.polynomial.Polynomial
    inner = P(np.asarray(p, dtype=complex))
    out = P([0j])
    for a in reversed(np.asarray(c, dtype=complex)):
        out = out * inner + a
    return np.asarray(out.coef, dtype=complex)


@dataclass(frozen=True)
class ArcMove:
    coordinate: int
    center: complex
    radius: float
    theta0: float
    theta1: float


class ArcSegment:
    """Circular arcs in one or more coordinates, the others held at ``base``.

    Every moving coordinate follows ``center + radius * exp(i theta(t))`` with
    ``theta`` linear from ``theta0`` to ``theta1``.
    """

    kind = "arc"

    def __init__(self, base: Sequence[complex], moves: Sequence[ArcMove]):
        self.base = np.array(base, dtype=complex)
        self.moves = tuple(moves)
        seen = set()
        for mv in self.moves:
            if not 0 <= mv.coordinate < len(self.base):
                raise ValueError(f"arc coordinate {mv.coordinate} out of range")
            if mv.coordinate in seen:
                raise ValueError("a coordinate moves twice in one arc")
            if mv.radius < 0:
                raise ValueError("arc radius must be nonnegative")
            seen.add(mv.coordinate)

    @classmethod
    def single(cls, base, coordinate, center, radius, theta0, theta1) -> "ArcSegment":
        return cls(base, [ArcMove(coordinate, complex(center), float(radius), float(theta0), float(theta1))])

    @property
    def dimension(self) -> int:
        return len(self.base)

    def position(self, t: float) -> np.ndarray:
        x = self.base.copy()
        for mv in self.moves:
            th = mv.theta0 + (mv.theta1 - mv.theta0) * t
            x[mv.coordinate] = mv.center + mv.radius * np.exp(1j * th)
        return x

    def velocity(self, t: float) -> np.ndarray:
        v = np.zeros(self.dimension, dtype=complex)
        for mv in self.moves:
            dth = mv.theta1 - mv.theta0
            th = mv.theta0 + dth * t
            v[mv.coordinate] = 1j * dth * mv.radius * np.exp(1j * th)
        return v

    def reversed(self) -> "ArcSegment":
        return ArcSegment(self.base, [ArcMove(m.coordinate, m.center, m.radius, m.theta1, m.theta0) for m in self.moves])

    def transformed(self, cmap: CoordinateMap) -> "ArcSegment":
        moves = []
        for m in self.moves:
            k = cmap.perm[m.coordinate]
            c = complex(cmap.scale(k))
            moves.append(ArcMove(k, c * m.center, abs(c) * m.radius, m.theta0 + np.angle(c), m.theta1 + np.angle(c)))
        return ArcSegment(cmap.apply(self.base), moves)

    def __repr__(self):
        return f"ArcSegment(dim={self.dimension}, moves={[m.coordinate for m in self.moves]})"


class PiecewisePath:
    """Concatenation of segments with matching endpoints."""

    def __init__(self, segments: Sequence):
        self.segments = tuple(segments)
        if not self.segments:
            raise ValueError("a path needs at least one segment")
        dim = self.segments[0].dimension
        for k, seg in enumerate(self.segments):
            if seg.dimension != dim:
                raise ValueError("segments have different ambient dimensions")
            if k:
                gap = np.max(np.abs(self.segments[k - 1].position(1.0) - seg.position(0.0)))
                if gap > CONTINUITY_TOL * max(1.0, np.max(np.abs(seg.position(0.0)))):
                    raise ValueError(f"segments {k - 1} and {k} do not meet (gap {gap:.3g})")

    @property
    def dimension(self) -> int:
        return self.segments[0].dimension

    @property
    def start(self) -> np.ndarray:
        return self.segments[0].position(0.0)

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1].position(1.0)

    def __mul__(self, other: "PiecewisePath") -> "PiecewisePath":
        """Path product: first self, then other."""
        return PiecewisePath(self.segments + other.segments)

    def inverse(self) -> "PiecewisePath":
        return PiecewisePath([s.reversed() for s in reversed(self.segments)])

    def transformed(self, cmap: CoordinateMap) -> "PiecewisePath":
        return PiecewisePath([s.transformed(cmap) for s in self.segments])

    def sample(self, per_segment: int = 32) -> np.ndarray:
        ts = np.linspace(0.0, 1.0, per_segment + 1)
        return np.array([seg.position(t) for seg in self.segments for t in ts])

    def diameter(self) -> float:
        pts = self.sample()
        diffs = pts[:, None, :] - pts[None, :, :]
        return float(np.max(np.linalg.norm(diffs, axis=2)))

    def __repr__(self):
        return f"PiecewisePath({len(self.segments)} segments, dim={self.dimension})"


def random_polynomial_path(rng: np.random.Generator, start, end, degree: int = 3, scale: float = 1.0) -> PiecewisePath:
    """A polynomial segment from ``start`` to ``end`` with random interior wiggle."""
    start = np.asarray(start, dtype=complex)
    end = np.asarray(end, dtype=complex)
    coeffs = []
    for a, b in zip(start, end):
        wiggle = scale * (rng.standard_normal(degree - 1) + 1j * rng.standard_normal(degree - 1))
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = a
        c[2:] = wiggle
        c[1] = b - a - wiggle.sum()
        coeffs.append(c)
    return PiecewisePath([PolynomialSegment(coeffs)])


# -- scalar one-forms -------------------------------------------------------


class DlogForm:
    """``d log(c + g.x)``."""

    kind = "dlog"

    def __init__(self, constant: complex, gradient: Sequence[complex]):
        self.constant = complex(constant)
        self.gradient = np.array(gradient, dtype=complex)
        if not np.any(self.gradient):
            raise ValueError("dlog of a constant function")

    @property
    def dimension(self) -> int:
        return len(self.gradient)

    def affine(self, x: np.ndarray) -> complex:
        return self.constant + complex(self.gradient @ x)

    def evaluate(self, x: np.ndarray, v: np.ndarray) -> complex:
        return complex(self.gradient @ v) / self.affine(x)

    def pullback(self, cmap: CoordinateMap) -> "DlogForm":
        """The form ``x -> self(cmap(x))``."""
        g = np.zeros_like(self.gradient)
        for j, k in enumerate(cmap.perm):
            g[j] = self.gradient[k] * cmap.scale(k)
        return DlogForm(self.constant, g)

    def key(self) -> tuple:
        """Normalized exact key: dlog(l) = dlog(c l) for nonzero c."""
        lead = next(v for v in self.gradient if v != 0)
        vals = [self.constant / lead] + [g / lead for g in self.gradient]
        return ("dlog",) + tuple(complex(round(v.real, 12), round(v.imag, 12)) for v in vals)

    def __repr__(self):
        return f"DlogForm({self.constant}, {list(self.gradient)})"


class PolyForm:
    """``f(x) dx_k`` with ``f = sum c_e x^e`` (exponent tuples)."""

    kind = "poly"

    def __init__(self, dimension: int, coordinate: int, coefficients: Mapping[tuple, complex]):
        if not 0 <= coordinate < dimension:
            raise ValueError("coordinate out of range")
        self._dimension = dimension
        self.coordinate = coordinate
        self.coefficients = {}
        for e, c in coefficients.items():
            e = tuple(int(a) for a in e)
            if len(e) != dimension or any(a < 0 for a in e):
                raise ValueError(f"bad exponent {e}")
            if c:
                self.coefficients[e] = complex(c)

    @property
    def dimension(self) -> int:
        return self._dimension

    def value(self, x: np.ndarray) -> complex:
        if not self.coefficients:
            return 0j
        if not hasattr(self, "_E"):
            self._E = np.array(list(self.coefficients), dtype=int)
            self._c = np.array(list(self.coefficients.values()), dtype=complex)
        return complex(self._c @ np.prod(x[None, :] ** self._E, axis=1))

    def evaluate(self, x: np.ndarray, v: np.ndarray) -> complex:
        return complex(self.value(x) * v[self.coordinate])

    def pullback(self, cmap: CoordinateMap) -> "PolyForm":
        n = self._dimension
        out = {}
        for e, c in self.coefficients.items():
            new = [0] * n
            coeff = complex(c)
            for j, k in enumerate(cmap.perm):
                new[j] = e[k]
                coeff *= cmap.scale(k) ** e[k]
            out[tuple(new)] = out.get(tuple(new), 0) + coeff
        k = self.coordinate
        j = cmap.perm.index(k)
        return PolyForm(n, j, {e: c * cmap.scale(k) for e, c in out.items()})

    def __repr__(self):
        return f"PolyForm(dx{self.coordinate}, {self.coefficients})"


@dataclass
class LieValuedOneForm:
    """``omega = sum_a w_a (x) L_a`` with ``L_a`` vectors of ``lie``."""

    lie: GradedNilpotentLie
    terms: list  # list of (scalar form, {index: coefficient})
    truncation: int | None = None

    def __post_init__(self):
        dims = {w.dimension for w, _ in self.terms}
        if len(dims) > 1:
            raise ValueError("scalar forms have different ambient dimensions")
        for _, vec in self.terms:
            for i in vec:
                if not 0 <= i < self.lie.dim:
                    raise ValueError("Lie coefficient outside the algebra")
        if self.truncation is None:
            self.truncation = self.lie.truncation

    @property
    def dimension(self) -> int:
        return self.terms[0][0].dimension if self.terms else 0

    def pullback(self, cmap: CoordinateMap) -> "LieValuedOneForm":
        return LieValuedOneForm(self.lie, [(w.pullback(cmap), v) for w, v in self.terms], self.truncation)


# -- integrator -----------------------------------------------------------

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A_ROWS = [np.array(row + [0.0] * (7 - len(row))) for row in _A]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_DB = _B5 - _B4


def _polynomial_pullbacks(seg, forms: Sequence) -> np.ndarray | None:
    """Rows of t-coefficients of the pulled-back forms, when all are polynomial."""
    if not isinstance(seg, PolynomialSegment) or not forms or not all(isinstance(w, PolyForm) for w in forms):
        return None
    P = np.polynomial.Polynomial
    xs = [P(c) for c in seg.coeffs]
    rows = []
    for w in forms:
        f = P([0j])
        for e, c in w.coefficients.items():
            term = P([c])
            for x, a in zip(xs, e):
                if a:
                    term = term * x**a
            f = f + term
        rows.append((f * xs[w.coordinate].deriv()).coef)
    width = max(len(r) for r in rows)
    out = np.zeros((len(rows), width), dtype=complex)
    for k, r in enumerate(rows):
        out[k, : len(r)] = r
    return out


def _guard(forms: Sequence, x: np.ndarray, threshold: float, where: str) -> None:
    for w in forms:
        if isinstance(w, DlogForm):
            val = abs(w.affine(x))
            if val < threshold or val == 0:
                raise SingularityError(f"path passes within {val:.3g} of a polar divisor at {where}")


def _integrate(
    path: PiecewisePath,
    forms: Sequence,
    apply,
    y0: np.ndarray,
    tol: float,
    floor: float = 1.0,
) -> tuple[np.ndarray, float, int]:
    """Solve ``y' = apply(y, f(t))`` along the path with ``f_k`` the pulled-back forms.

    Per unit step the local error of each component is kept below
    ``tol * max(|y_k|, floor)``; returns (y, summed local error, steps).
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if forms and path.dimension != forms[0].dimension:
        raise ValueError(f"path lives in C^{path.dimension} but the forms in C^{forms[0].dimension}")
    threshold = SINGULAR_FRACTION * path.diameter()
    y = np.array(y0, dtype=complex)
    err_total = 0.0
    steps = 0

    for s_idx, seg in enumerate(path.segments):
        pulled = _polynomial_pullbacks(seg, forms)
        if pulled is not None:
            powers = np.arange(pulled.shape[1])

            def rhs(t: float, yy: np.ndarray) -> np.ndarray:
                return apply(yy, pulled @ (t**powers))

        else:

            def rhs(t: float, yy: np.ndarray) -> np.ndarray:
                x = seg.position(t)
                _guard(forms, x, threshold, f"segment {s_idx}, t={t:.6g}")
                v = seg.velocity(t)
                return apply(yy, np.array([w.evaluate(x, v) for w in forms]))

        t, h = 0.0, 0.05
        K = np.empty((7,) + y.shape, dtype=complex)
        flat = K.reshape(7, -1)
        K[0] = rhs(0.0, y)
        while t < 1.0:
            h = min(h, 1.0 - t)
            if h < MIN_STEP:
                # stalling next to a polar divisor is a singularity, not a tolerance problem
                _guard(forms, seg.position(t), threshold * 1e3, f"segment {s_idx}, t={t:.6g}")
                raise TransportError(f"step size underflow in segment {s_idx} at t={t:.6g}")
            for i in range(1, 7):
                K[i] = rhs(t + _C[i] * h, y + h * (_A_ROWS[i][:i] @ flat[:i]).reshape(y.shape))
            y5 = y + h * (_B5 @ flat).reshape(y.shape)
            delta = h * (_DB @ flat).reshape(y.shape)
            scale = np.maximum(np.abs(y), floor)
            ratio = float(np.max(np.abs(delta) / scale)) / (tol * h)
            if ratio <= 1.0:
                t += h
                y = y5
                K[0] = K[6]
                err_total += float(np.max(np.abs(delta)))
                steps += 1
            factor = 0.9 * ratio ** -0.25 if ratio > 0 else 5.0
            h *= min(5.0, max(0.2, factor))
    return y, err_total, steps


def iterated_integral(path: PiecewisePath, forms: Sequence, tol: float = DEFAULT_TOL) -> complex:
    """``int_path w_1 ... w_r`` (the empty word integrates to 1)."""
    return complex(prefix_integrals(path, forms, tol)[-1])


def prefix_integrals(path: PiecewisePath, forms: Sequence, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``[1, int w_1, int w_1 w_2, ..., int w_1 ... w_r]`` from a single solve."""
    r = len(forms)
    if r == 0:
        return np.ones(1, dtype=complex)
    y0 = np.zeros(r + 1, dtype=complex)
    y0[0] = 1.0

    def apply(y: np.ndarray, f: np.ndarray) -> np.ndarray:
        out = np.zeros_like(y)
        out[1:] = y[:-1] * f
        return out

    y, _, _ = _integrate(path, list(forms), apply, y0, tol, floor=ITERATED_FLOOR)
    return y


@dataclass
class TransportResult:
    series: TruncatedSeries
    error: float
    steps: int

    def __mul__(self, other: "TransportResult") -> "TransportResult":
        return TransportResult(self.series * other.series, self.error + other.error, self.steps + other.steps)


_ENVELOPES: dict = {}


def envelope_for(lie: GradedNilpotentLie, truncation: int) -> Envelope:
    key = (id(lie), truncation)
    env = _ENVELOPES.get(key)
    if env is None or env.lie is not lie:
        env = Envelope(lie, truncation)
        _ENVELOPES[key] = env
    return env


def transport(path: PiecewisePath, omega: LieValuedOneForm, tol: float = DEFAULT_TOL) -> TransportResult:
    """Parallel transport ``T`` with ``T' = T omega(x')`` and ``T(0) = 1``."""
    env = envelope_for(omega.lie, omega.truncation)
    cache = getattr(omega, "_matrix_cache", None)
    if cache is None or cache[0] is not env:
        mats = [env.right_multiplication_matrix(vec) for _, vec in omega.terms]
        omega._matrix_cache = (env, mats)
    mats = omega._matrix_cache[1]
    y0 = env.one(COMPLEX).to_vector()
    stacked = np.array(mats) if mats else np.zeros((0, env.dim, env.dim), dtype=complex)

    def apply(y: np.ndarray, f: np.ndarray) -> np.ndarray:
        return y @ np.tensordot(f, stacked, axes=1) if len(f) else np.zeros_like(y)

    y, err, steps = _integrate(path, [w for w, _ in omega.terms], apply, y0, tol)
    return TransportResult(env.from_vector(y, COMPLEX), err, steps)


# -- integrability ----------------------------------------------------------


@dataclass
class IntegrabilityResult:
    integrable: bool
    certificate: dict  # Lie basis label -> {(i, j): nonzero 2-form coefficient as text}

    def __bool__(self):
        return self.integrable


def _exact(value):
    import sympy

    z = complex(value)
    re = sympy.nsimplify(z.real, rational=True)
    im = sympy.nsimplify(z.imag, rational=True)
    return re + sympy.I * im


def _symbolic_one_form(w, xs):
    """Components ``[a_0, ..., a_{n-1}]`` of a scalar form and its exterior derivative."""
    import sympy

    n = len(xs)
    if isinstance(w, DlogForm):
        ell = _exact(w.constant) + sum(_exact(g) * x for g, x in zip(w.gradient, xs))
        comps = [_exact(g) / ell for g in w.gradient]
        return comps, {}
    if isinstance(w, PolyForm):
        f = sum((_exact(c) * sympy.prod([x**a for x, a in zip(xs, e)]) for e, c in w.coefficients.items()), sympy.Integer(0))
        comps = [sympy.Integer(0)] * n
        comps[w.coordinate] = f
        d = {}
        k = w.coordinate
        for j in range(n):
            if j == k:
                continue
            df = sympy.diff(f, xs[j])
            if df != 0:
                # df/dx_j dx_j ^ dx_k
                key, sign = ((j, k), 1) if j < k else ((k, j), -1)
                d[key] = d.get(key, 0) + sign * df
        return comps, d
    raise TypeError(f"unsupported form kind {type(w).__name__}")


def check_integrability(omega: LieValuedOneForm) -> IntegrabilityResult:
    """Exact test of ``d omega + omega ^ omega = 0`` in the coefficient algebra."""
    import sympy

    n = omega.dimension
    xs = sympy.symbols(f"x0:{n}")
    lie = omega.lie
    sym = [_symbolic_one_form(w, xs) for w, _ in omega.terms]
    total: dict = {}  # (lie index, (i, j)) -> expression

    def add(e, key, expr):
        total[e, key] = total.get((e, key), 0) + expr

    for (comps, d), (_, vec) in zip(sym, omega.terms):
        for key, expr in d.items():
            for e, c in vec.items():
                add(e, key, _exact_rational(c) * expr)
    m = len(omega.terms)
    for a in range(m):
        for b in range(a + 1, m):
            br = lie.bracket(omega.terms[a][1], omega.terms[b][1])
            if not br:
                continue
            ca, cb = sym[a][0], sym[b][0]
            for i in range(n):
                for j in range(i + 1, n):
                    wedge = ca[i] * cb[j] - ca[j] * cb[i]
                    if wedge == 0:
                        continue
                    for e, c in br.items():
                        add(e, (i, j), _exact_rational(c) * wedge)
    certificate: dict = {}
    for (e, key), expr in sorted(total.items(), key=lambda t: (t[0][0], t[0][1])):
        simplified = sympy.cancel(sympy.together(expr))
        if simplified != 0:
            certificate.setdefault(lie.labels[e], {})[key] = str(sympy.factor(simplified))
    return IntegrabilityResult(not certificate, certificate)


def _exact_rational(c):
    import sympy

    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    if isinstance(c, int):
        return sympy.Integer(c)
    return _exact(c)


# -- coverings and coefficients in O(S) -------------------------------------


class CoveringSpace:
    """A finite Galois cover realized on C^n with deck maps.

    ``deck[g]`` is a :class:`CoordinateMap` and ``g -> deck[g]`` must be a
    left action. A loop in the base at the image of ``basepoint`` is
    represented by its lift starting at ``basepoint``; its monodromy is the
    unique g with ``deck[g](basepoint) == end``.
    """

    def __init__(self, group: FiniteGroup, deck: Mapping, basepoint: Sequence[complex]):
        self.group = group
        self.deck = dict(deck)
        self.basepoint = np.array(basepoint, dtype=complex)
        for g in group.elements:
            if g not in self.deck:
                raise ValueError(f"missing deck map for {g!r}")
        for g in group.elements:
            for h in group.elements:
                if not self.deck[g].compose(self.deck[h]).is_close(self.deck[group.mul(g, h)]):
                    raise ValueError(f"deck maps are not a left action at ({g!r}, {h!r})")
        orbit = [self.deck[g].apply(self.basepoint) for g in group.elements]
        for i in range(len(orbit)):
            for j in range(i):
                if np.max(np.abs(orbit[i] - orbit[j])) < 1e-9:
                    raise ValueError("basepoint has a nontrivial stabilizer")
        self._orbit = orbit

    def monodromy_of(self, lift: PiecewisePath, tol: float = 1e-8):
        if np.max(np.abs(lift.start - self.basepoint)) > tol:
            raise ValueError("lift does not start at the basepoint")
        end = lift.end
        for g, p in zip(self.group.elements, self._orbit):
            if np.max(np.abs(end - p)) <= tol * max(1.0, float(np.max(np.abs(p)))):
                return g
        raise ValueError("lift does not end over the basepoint")

    def concat(self, a: PiecewisePath, b: PiecewisePath) -> PiecewisePath:
        """Lift of the product of the loops lifted by ``a`` and ``b``."""
        g = self.monodromy_of(a)
        return a * b.transformed(self.deck[g])

    def inverse(self, a: PiecewisePath) -> PiecewisePath:
        g = self.monodromy_of(a)
        return a.inverse().transformed(self.deck[self.group.inv(g)])

    def translate(self, g, forms: Sequence) -> list:
        """Deck translates ``deck[g]^* w`` of scalar forms."""
        return [w.pullback(self.deck[g]) for w in forms]


def _evaluate_coefficient(phi, g) -> complex:
    if isinstance(phi, Mapping):
        return complex(phi.get(g, 0))
    if callable(phi):
        return complex(phi(g))
    return 1.0 + 0j if phi == g else 0j


def iterated_integral_with_coeff(
    lift: PiecewisePath,
    forms: Sequence,
    phi,
    cover: CoveringSpace,
    tol: float = DEFAULT_TOL,
) -> complex:
    """``phi(rho(gamma)) * int over the lift of w_1 ... w_r``.

    ``phi`` is a function on the group given as a mapping, a callable, or a
    group element standing for its indicator function.
    """
    g = cover.monodromy_of(lift)
    value = _evaluate_coefficient(phi, g)
    if value == 0:
        return 0j
    return value * iterated_integral(lift, forms, tol)


def monodromy(lift: PiecewisePath, omega: LieValuedOneForm, cover: CoveringSpace | None = None, tol: float = DEFAULT_TOL):
    """``(rho(gamma), T)`` with T the transport along the lift.

    These pairs compose as ``(g1, T1)(g2, T2) = (g1 g2, T1 Ad(g1) T2)``.
    """
    result = transport(lift, omega, tol)
    if cover is None:
        return None, result
    return cover.monodromy_of(lift), result
