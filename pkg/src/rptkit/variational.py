"""Gauge-invariant variation on generating-function series and identity audits.

The variation acts on monomials only: X^n -> n X^(n-2) (one differentiation
picks an upper index, the paired lower index is then removed by dividing by
X).  The audit functions compare generating-function members coefficient
by coefficient and *report* the first mismatch; they never assume the
members are equal.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ._rational import format_rational
from .combinatorics import bell_numbers
from .series import (Series, SeriesError, coefficient_deltas, constant_term, exp_series,
                     first_mismatch, variable)

MAX_AUDIT_ORDER = 32


@dataclass(frozen=True)
class VariationReport:
    identity: str
    members: tuple
    order_checked: int
    mismatch: tuple | None = None  # (multi-index, lhs, rhs)
    deltas: tuple | None = None  # rows (multi-index, lhs, rhs, lhs - rhs)

    @property
    def agrees(self):
        return self.mismatch is None

    def to_json(self):
        doc = {
            "identity": self.identity,
            "members": list(self.members),
            "order_checked": self.order_checked,
            "mismatch": None if self.mismatch is None else {
                "order": list(self.mismatch[0]),
                "lhs": format_rational(self.mismatch[1]),
                "rhs": format_rational(self.mismatch[2]),
            },
        }
        if self.deltas is not None:
            doc["deltas"] = [{"order": list(k), "lhs": format_rational(a),
                              "rhs": format_rational(b), "delta": format_rational(d)}
                             for k, a, b, d in self.deltas]
        return doc


def _lowered(index, j):
    return index[:j] + (index[j] - 2,) + index[j + 1:]


def gi_second_variation(series):
    """Linear map X^n -> n X^(n-2) on a univariate series; truncation drops by 2."""
    if series.num_vars != 1:
        raise SeriesError("gi_second_variation is univariate; use multivariate_2var")
    return multivariate_2var(series)


def multivariate_2var(series):
    """Per-variable action (xi_j X_j)^n -> n (xi_j X_j)^(n-2), summed over j.

    Only pure powers of a single variable are acted on; a mixed monomial
    such as X_1 X_2 maps to zero.
    """
    if series.truncation_order < 2:
        raise SeriesError("the second variation needs truncation order >= 2")
    out = {}
    for index, c in series.coeffs.items():
        support = [j for j, e in enumerate(index) if e]
        if len(support) != 1:
            continue
        j = support[0]
        n = index[j]
        if n < 2:
            continue
        key = _lowered(index, j)
        out[key] = out.get(key, 0) + n * c
    return Series(series.num_vars, series.truncation_order - 2, out)


def gi_2n_variation(series, n):
    """The second variation applied n times."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if series.truncation_order < 2 * n:
        raise SeriesError(
            f"truncation order {series.truncation_order} < 2n = {2 * n}")
    for _ in range(n):
        series = gi_second_variation(series)
    return series


# --- the generating functions being audited -----------------------------------

def bell_egf_series(order):
    """sum_n B_n X^n / n!, from the Bell numbers."""
    b = bell_numbers(order)
    return Series(1, order, {(n,): Fraction(b[n], factorial(n)) for n in range(order + 1)})


def exp_exp_series(order):
    """exp(e^X - 1), by series composition."""
    return exp_series(exp_minus_one(order))


def exp_minus_one(order):
    return exp_series(variable(0, 1, order)) - 1


def shifted_bell_series(order):
    """sum_n B_(n+2) X^n / (n+1)!."""
    b = bell_numbers(order + 2)
    return Series(1, order, {(n,): Fraction(b[n + 2], factorial(n + 1))
                             for n in range(order + 1)})


def closed_form_2n(n, order):
    """(n-1)! (e^X - 1)^n exp(e^X - 1)."""
    inner = exp_minus_one(order)
    return (inner ** n) * exp_series(inner) * factorial(n - 1)


def _report(name, members, lhs, rhs, min_order=0, with_deltas=False):
    m = first_mismatch(lhs, rhs, min_order)
    order = min(lhs.truncation_order, rhs.truncation_order)
    deltas = tuple(coefficient_deltas(lhs, rhs, min_order)) if with_deltas else None
    return VariationReport(name, tuple(members), order,
                           None if m is None else (m.index, m.lhs, m.rhs), deltas)


def _check_order(N, lowest):
    if N > MAX_AUDIT_ORDER:
        raise ValueError(f"order {N} exceeds the audit cap {MAX_AUDIT_ORDER}")
    if N < lowest:
        raise ValueError(f"order {N} too small (need >= {lowest})")


def check_bell_egf(N):
    """sum B_n X^n/n! against exp(e^X - 1) through order N."""
    _check_order(N, 0)
    return _report("bell-egf", ("sum B_n X^n/n!", "exp(e^X-1)"),
                   bell_egf_series(N), exp_exp_series(N))


MEMBERS_2VAR = {
    "i": "(i) second variation of sum B_n X^n/n!",
    "ii": "(ii) sum B_(n+2) X^n/(n+1)!",
    "iii": "(iii) (e^X-1) exp(e^X-1)",
}


def check_2var_identity(N):
    """Pairwise audit of the three members, starting from the vacuum series at order N.

    Returns reports for (i)/(ii), (ii)/(iii) and (i)/(iii), each compared
    through order N - 2.
    """
    _check_order(N, 4)
    first = gi_second_variation(bell_egf_series(N))
    second = shifted_bell_series(N - 2)
    third = closed_form_2n(1, N - 2)
    members = {"i": first, "ii": second, "iii": third}
    reports = []
    for a, b in (("i", "ii"), ("ii", "iii"), ("i", "iii")):
        reports.append(_report(f"2var:{a}-{b}", (MEMBERS_2VAR[a], MEMBERS_2VAR[b]),
                               members[a], members[b]))
    return reports


def check_2nvar_identity(n, N, min_order=0, with_deltas=None):
    """n-fold second variation of exp(e^X - 1) against (n-1)!(e^X - 1)^n exp(e^X - 1).

    Both sides are compared through order N - 2n.  With ``min_order > 0``
    the comparison skips lower orders and, unless disabled, the per-order
    table of lhs, rhs and their difference is attached.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_order(N, 2 * n + 2)
    if with_deltas is None:
        with_deltas = min_order > 0
    lhs = gi_2n_variation(exp_exp_series(N), n)
    rhs = closed_form_2n(n, N - 2 * n)
    return _report(f"2nvar:n={n}",
                   (f"order-{2 * n} variation of exp(e^X-1)",
                    f"{n - 1}! (e^X-1)^{n} exp(e^X-1)"),
                   lhs, rhs, min_order, with_deltas)


def vacuum_norm_at_limit():
    """exp(e^X - 1) at X = 0, read off as its constant coefficient."""
    return constant_term(exp_exp_series(0))


def mass_series_at_limit():
    """(e^X - 1) exp(e^X - 1) at X = 0."""
    return constant_term(closed_form_2n(1, 0))

