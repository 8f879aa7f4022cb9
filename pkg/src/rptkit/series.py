"""Truncated multivariate formal power series with exact rational coefficients.

A :class:`Series` stores the coefficients of every monomial of total degree
at most ``truncation_order``; anything above that order is unknown rather
than zero.  All arithmetic stays in :class:`fractions.Fraction`.
"""

from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import NamedTuple

from ._rational import format_rational, to_fraction
from .errors import DocumentError


class SeriesError(ValueError):
    """Contract violation on series construction or arithmetic."""


class TruncationError(SeriesError):
    """A coefficient beyond the truncation order was requested.

    Kept distinct from a true zero coefficient.
    """


class Mismatch(NamedTuple):
    index: tuple
    lhs: Fraction
    rhs: Fraction


def grlex_key(index):
    """Graded lexicographic sort key: total degree first, then lexicographic."""
    return (sum(index), tuple(index))


def _check_index(index, num_vars):
    index = tuple(index)
    if len(index) != num_vars:
        raise SeriesError(f"multi-index {index} has length {len(index)}, expected {num_vars}")
    for e in index:
        if isinstance(e, bool) or not isinstance(e, int) or e < 0:
            raise SeriesError(f"multi-index {index} must hold non-negative integers")
    return index


class Series:
    __slots__ = ("num_vars", "truncation_order", "_coeffs")

    def __init__(self, num_vars, truncation_order, coeffs=None):
        if isinstance(num_vars, bool) or not isinstance(num_vars, int) or num_vars < 1:
            raise SeriesError("num_vars must be a positive integer")
        if isinstance(truncation_order, bool) or not isinstance(truncation_order, int) \
                or truncation_order < 0:
            raise SeriesError("truncation_order must be a non-negative integer")
        normalized = {}
        for raw_key, raw_value in (coeffs or {}).items():
            if isinstance(raw_key, int) and not isinstance(raw_key, bool):
                raw_key = (raw_key,) if num_vars == 1 else raw_key
            key = _check_index(raw_key, num_vars)
            if sum(key) > truncation_order:
                raise SeriesError(
                    f"coefficient at {key} exceeds truncation order {truncation_order}")
            value = to_fraction(raw_value)
            total = normalized.get(key, 0) + value
            if total:
                normalized[key] = total
            else:
                normalized.pop(key, None)
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "truncation_order", truncation_order)
        object.__setattr__(self, "_coeffs", normalized)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def items(self):
        """Nonzero (index, coefficient) pairs in graded lexicographic order."""
        return sorted(self._coeffs.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.num_vars == other.num_vars
                and self.truncation_order == other.truncation_order
                and self._coeffs == other._coeffs)

    def __hash__(self):
        return hash((self.num_vars, self.truncation_order, frozenset(self._coeffs.items())))

    def __repr__(self):
        terms = ", ".join(f"{k}: {format_rational(v)}" for k, v in self.items())
        return f"Series(num_vars={self.num_vars}, N={self.truncation_order}, {{{terms}}})"

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return add(self, scale(_coerce(other, self), -1))

    def __rsub__(self, other):
        return add(_coerce(other, self), scale(self, -1))

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return scale(self, 1 / to_fraction(other))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise SeriesError("only non-negative integer powers are supported")
        result = constant(1, self.num_vars, self.truncation_order)
        for _ in range(k):
            result = mul(result, self)
        return result


def _coerce(value, like):
    if isinstance(value, Series):
        return value
    return constant(value, like.num_vars, like.truncation_order)


def make_series(num_vars, truncation_order, coeffs):
    """Build a normalized series; keys may be tuples (or bare ints when univariate)."""
    return Series(num_vars, truncation_order, coeffs)


def constant(value, num_vars=1, truncation_order=0):
    return Series(num_vars, truncation_order, {(0,) * num_vars: value})


def variable(j, num_vars=1, truncation_order=1):
    """The monomial X_j (0-based ``j``)."""
    if not 0 <= j < num_vars:
        raise SeriesError(f"variable index {j} out of range for {num_vars} variables")
    if truncation_order < 1:
        return Series(num_vars, truncation_order)
    index = tuple(1 if i == j else 0 for i in range(num_vars))
    return Series(num_vars, truncation_order, {index: 1})


def univariate(coefficients, truncation_order=None):
    """Univariate series from a list ``[c0, c1, ...]``."""
    coefficients = list(coefficients)
    if truncation_order is None:
        truncation_order = len(coefficients) - 1
    return Series(1, truncation_order,
                  {(n,): c for n, c in enumerate(coefficients) if n <= truncation_order})


def truncate(s, order):
    if order > s.truncation_order:
        raise SeriesError(f"cannot raise truncation order {s.truncation_order} to {order}")
    return Series(s.num_vars, order, {k: v for k, v in s._coeffs.items() if sum(k) <= order})


def _check_compatible(a, b):
    if a.num_vars != b.num_vars:
        raise SeriesError(f"variable-count mismatch: {a.num_vars} vs {b.num_vars}")


def add(a, b):
    _check_compatible(a, b)
    order = min(a.truncation_order, b.truncation_order)
    out = {}
    for src in (a._coeffs, b._coeffs):
        for k, v in src.items():
            if sum(k) <= order:
                out[k] = out.get(k, 0) + v
    return Series(a.num_vars, order, out)


def scale(s, factor):
    factor = to_fraction(factor)
    return Series(s.num_vars, s.truncation_order,
                  {k: v * factor for k, v in s._coeffs.items()})


def mul(a, b):
    """Cauchy product truncated at the smaller of the two orders."""
    _check_compatible(a, b)
    order = min(a.truncation_order, b.truncation_order)
    right = sorted(((sum(k), k, v) for k, v in b._coeffs.items() if sum(k) <= order),
                   key=lambda t: t[0])
    out = {}
    for ka, va in a._coeffs.items():
        da = sum(ka)
        if da > order:
            continue
        room = order - da
        for db, kb, vb in right:
            if db > room:
                break
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, 0) + va * vb
    return Series(a.num_vars, order, out)


def coefficient(s, index):
    index = _check_index((index,) if isinstance(index, int) else index, s.num_vars)
    if sum(index) > s.truncation_order:
        raise TruncationError(
            f"index {index} is beyond truncation order {s.truncation_order}")
    return s._coeffs.get(index, Fraction(0))


def constant_term(s):
    return s._coeffs.get((0,) * s.num_vars, Fraction(0))


def exp_series(s):
    """exp(s) = sum_k s^k / k!, for s with zero constant term."""
    if constant_term(s) != 0:
        raise SeriesError("exp_series needs a zero constant term")
    n = s.num_vars
    result = constant(1, n, s.truncation_order)
    power = result
    for k in range(1, s.truncation_order + 1):
        power = mul(power, s)
        if not power._coeffs:
            break
        result = add(result, scale(power, Fraction(1, factorial(k))))
    return result


def log_series(s):
    """log(s) = sum_k (-1)^(k+1) (s - 1)^k / k, for s with constant term 1."""
    if constant_term(s) != 1:
        raise SeriesError("log_series needs constant term exactly 1")
    n = s.num_vars
    u = add(s, constant(-1, n, s.truncation_order))
    result = Series(n, s.truncation_order)
    power = constant(1, n, s.truncation_order)
    for k in range(1, s.truncation_order + 1):
        power = mul(power, u)
        if not power._coeffs:
            break
        result = add(result, scale(power, Fraction((-1) ** (k + 1), k)))
    return result


def _comparable(a, b, min_order):
    _check_compatible(a, b)
    order = min(a.truncation_order, b.truncation_order)
    keys = {k for k in a._coeffs if min_order <= sum(k) <= order}
    keys |= {k for k in b._coeffs if min_order <= sum(k) <= order}
    return sorted(keys, key=grlex_key)


def first_mismatch(a, b, min_order=0):
    """Smallest index (graded lex) where the coefficients differ, or None.

    Only orders up to the smaller truncation order are compared, and none
    below ``min_order``.
    """
    for key in _comparable(a, b, min_order):
        lhs = a._coeffs.get(key, Fraction(0))
        rhs = b._coeffs.get(key, Fraction(0))
        if lhs != rhs:
            return Mismatch(key, lhs, rhs)
    return None


def coefficient_deltas(a, b, min_order=0):
    """Every comparable index from ``min_order`` up, with both sides and lhs - rhs.

    Univariate inputs list every order (zeros included); multivariate inputs
    list only indices stored in either operand.
    """
    if a.num_vars == 1:
        order = min(a.truncation_order, b.truncation_order)
        _check_compatible(a, b)
        keys = [(n,) for n in range(min_order, order + 1)]
    else:
        keys = _comparable(a, b, min_order)
    rows = []
    for key in keys:
        lhs = a._coeffs.get(key, Fraction(0))
        rhs = b._coeffs.get(key, Fraction(0))
        rows.append((key, lhs, rhs, lhs - rhs))
    return rows


def to_json(s):
    return {
        "num_vars": s.num_vars,
        "truncation_order": s.truncation_order,
        "coeffs": [{"index": list(k), "value": format_rational(v)} for k, v in s.items()],
    }


def from_json(doc):
    try:
        num_vars = doc["num_vars"]
        order = doc["truncation_order"]
        entries = doc["coeffs"]
        coeffs = {}
        for entry in entries:
            key = tuple(entry["index"])
            if key in coeffs:
                raise DocumentError(f"duplicate index {list(key)}")
            coeffs[key] = to_fraction(entry["value"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed series document: {exc}") from None
    return Series(num_vars, order, coeffs)
