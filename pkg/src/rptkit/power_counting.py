"""UV degree bookkeeping and Feynman-parameter quadrature.

Two degree notions live side by side and are never mixed: the leg-count
degree ``2 (el - 2)`` with its per-line share ``(el - 2) / el``, and the
standard four-dimensional loop count ``4 L - 2 I``.  Floating point appears
only in the quadrature routines below.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._rational import format_rational, to_fraction
from .diagrams import DisconnectedDiagramError, _index_graph, _is_connected

SPACETIME_DIM = 4
PROPAGATOR_POWER = 2
DEFAULT_POINTS = 128
MAX_MIXTURE = 4


class PowerCountingError(ValueError):
    pass


def paper_degree(el):
    """Whole-diagram degree 2 (el - 2) for an even leg count."""
    if el < 0 or el % 2:
        raise PowerCountingError(f"el={el}: leg counts must be even and non-negative")
    return 2 * (el - 2)


def per_line_exponent(el):
    """Per-line share (el - 2) / el = 1 - 2/el of the whole-diagram degree."""
    if el == 0:
        raise PowerCountingError("per-line exponent undefined for vacuum diagrams (el = 0)")
    if el < 0 or el % 2:
        raise PowerCountingError(f"el={el}: leg counts must be even and positive")
    return Fraction(el - 2, el)


def loop_number(diagram):
    n, pairs = _index_graph(diagram)
    if not _is_connected(n, pairs):
        raise DisconnectedDiagramError("loop counting needs a connected diagram")
    return len(pairs) - n + 1 if n else 0


def loop_degree(diagram):
    """Superficial degree 4 L - 2 I with L the first Betti number."""
    loops = loop_number(diagram)
    return SPACETIME_DIM * loops - PROPAGATOR_POWER * len(diagram.edges)


def sobolev_shift(degree, s, num_momentum_vars):
    """degree + s * k: each integration variable weighted by the norm index s."""
    if num_momentum_vars < 0:
        raise PowerCountingError("num_momentum_vars must be non-negative")
    return to_fraction(degree) + to_fraction(s) * num_momentum_vars


def classify(degree):
    if degree < 0:
        return "convergent"
    if degree == 0:
        return "logarithmic"
    return "power-divergent"


def schwinger_order_admissible(j, n, delta):
    """Exact test of j <= n**delta for a rational delta >= 0 (integers j, n >= 1).

    The admissible delta itself is not known; this only evaluates the
    constraint for a caller-supplied value.
    """
    delta = to_fraction(delta)
    if delta < 0 or j < 0 or n < 1:
        raise PowerCountingError("need delta >= 0, j >= 0, n >= 1")
    p, q = delta.numerator, delta.denominator
    return j ** q <= n ** p


@dataclass(frozen=True)
class DivergenceReport:
    el: int
    paper_degree: int | None
    per_line_exponent: Fraction | None
    loop_degree: int
    loops: int
    sobolev_index: Fraction
    shifted_degree: Fraction
    classification: str
    lattice_spacing: str | None = None

    def to_json(self):
        return {
            "el": self.el,
            "paper_degree": self.paper_degree,
            "per_line_exponent": (None if self.per_line_exponent is None
                                  else format_rational(self.per_line_exponent)),
            "loop_degree": self.loop_degree,
            "loops": self.loops,
            "sobolev_index": format_rational(self.sobolev_index),
            "shifted_degree": format_rational(self.shifted_degree),
            "classification": self.classification,
            "lattice_spacing": self.lattice_spacing,
        }


def divergence_report(diagram, sobolev_index=0, lattice_spacing=None):
    """Both degree notions for a connected diagram.

    ``paper_degree`` and ``per_line_exponent`` are None where undefined (odd
    el; el = 0 for the per-line share).  The Sobolev shift is applied to the
    loop degree with one momentum variable per loop; the classification
    follows the sign of the shifted degree.  ``lattice_spacing`` is carried
    as an annotation only.
    """
    el = diagram.el
    loops = loop_number(diagram)
    ldeg = SPACETIME_DIM * loops - PROPAGATOR_POWER * len(diagram.edges)
    pdeg = paper_degree(el) if el % 2 == 0 else None
    pline = per_line_exponent(el) if el % 2 == 0 and el > 0 else None
    s = to_fraction(sobolev_index)
    shifted = sobolev_shift(ldeg, s, loops)
    return DivergenceReport(el, pdeg, pline, ldeg, loops, s, shifted, classify(shifted),
                            None if lattice_spacing is None else str(lattice_spacing))


# --- quadrature ------------------------------------------------------------------

class QuadratureResult(NamedTuple):
    value: float
    reference: float
    abs_error: float


def _unit_rule(points):
    if points < 16:
        raise PowerCountingError("need at least 16 quadrature points")
    x, w = _gauss_legendre(int(points))
    return x.copy(), w.copy()


@lru_cache(maxsize=16)
def _gauss_legendre(points):
    x, w = np.polynomial.legendre.leggauss(points)
    return (x + 1.0) / 2.0, w / 2.0


def _positive(values):
    out = [float(v) for v in values]
    if any(not math.isfinite(v) or v <= 0 for v in out):
        raise PowerCountingError(f"parameters must be positive and finite, got {values}")
    return out


def feynman_combine(alpha, beta, quadrature_points=DEFAULT_POINTS):
    """Gauss-Legendre value of int_0^1 dx / [alpha x + beta (1 - x)]^2 against 1/(alpha beta)."""
    alpha, beta = _positive([alpha, beta])
    x, w = _unit_rule(quadrature_points)
    if alpha == beta:
        value = math.fsum(w) / (alpha * alpha)
    else:
        value = math.fsum(w / (alpha * x + beta * (1.0 - x)) ** 2)
    reference = 1.0 / (alpha * beta)
    return QuadratureResult(value, reference, abs(value - reference))


def symmetric_mixture(alphas, quadrature_points=64):
    """(n-1)! times the simplex integral of [sum x_i alpha_i]^-n, against 1/prod(alpha_i).

    The simplex is mapped to the unit cube by the collapsed coordinates
    x_k = u_k prod_{i<k}(1 - u_i), whose Jacobian is
    prod_k (1 - u_k)^(n-1-k); a tensor Gauss-Legendre rule does the rest.
    """
    alphas = _positive(alphas)
    n = len(alphas)
    if n < 2:
        raise PowerCountingError("need at least two propagators")
    if n > MAX_MIXTURE:
        raise PowerCountingError(f"mixtures are limited to {MAX_MIXTURE} propagators")
    u, w = _unit_rule(quadrature_points)
    grids = np.meshgrid(*([u] * (n - 1)), indexing="ij")
    weights = np.ones_like(grids[0])
    for axis in range(n - 1):
        shape = [1] * (n - 1)
        shape[axis] = -1
        weights = weights * w.reshape(shape)
    remaining = np.ones_like(grids[0])
    denom = np.zeros_like(grids[0])
    jac = np.ones_like(grids[0])
    for k in range(n - 1):
        xk = remaining * grids[k]
        denom += xk * alphas[k]
        jac *= (1.0 - grids[k]) ** (n - 2 - k)
        remaining = remaining * (1.0 - grids[k])
    denom += remaining * alphas[-1]
    value = math.factorial(n - 1) * math.fsum((weights * jac / denom ** n).ravel())
    reference = 1.0 / math.prod(alphas)
    return QuadratureResult(value, reference, abs(value - reference))


def uniformity_probe(alphas, ratio_bound):
    """True iff every pairwise ratio lies in [1/M, M]."""
    if ratio_bound < 1:
        raise PowerCountingError("ratio bound M must be >= 1")
    values = list(alphas)
    if any(v <= 0 for v in values):
        raise PowerCountingError("parameters must be positive")
    if not values:
        return True
    return max(values) <= ratio_bound * min(values)


def log_grid(lo=0.1, hi=10.0, size=20):
    return [float(v) for v in np.geomspace(lo, hi, size)]


def feynman_sweep(lo=0.1, hi=10.0, size=20, quadrature_points=DEFAULT_POINTS):
    """feynman_combine over a size x size log grid; rows are (alpha, beta, result)."""
    grid = log_grid(lo, hi, size)
    return [(a, b, feynman_combine(a, b, quadrature_points)) for a in grid for b in grid]
