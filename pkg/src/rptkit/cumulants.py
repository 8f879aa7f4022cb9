"""Multivariate moment <-> cumulant conversion, two independent ways.

``cumulants_from_moments_series`` takes the logarithm of the moment
generating function; ``cumulants_from_moments_partition`` sums over
multiset partitions of the multi-index.  The series route is the reference.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod
from types import MappingProxyType
from typing import NamedTuple

from ._rational import format_rational, to_fraction
from .errors import DocumentError
from .series import Series, exp_series, grlex_key, log_series


class MomentPreconditionError(ValueError):
    """The moment table is not normalized (mu(0, ..., 0) != 1)."""


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    """Particle-type bookkeeping: gauge generators plus matter-field components."""

    dim_gauge: int = 1
    dim_matter: int = 0
    coupling: Fraction = Fraction(1)

    def __post_init__(self):
        if self.dim_gauge < 1 or self.dim_matter < 0:
            raise ValueError("need dim_gauge >= 1 and dim_matter >= 0")
        object.__setattr__(self, "coupling", to_fraction(self.coupling))

    @property
    def num_types(self):
        return self.dim_gauge + self.dim_matter

    def to_json(self):
        return {"dim_gauge": self.dim_gauge, "dim_matter": self.dim_matter,
                "coupling": format_rational(self.coupling)}

    @classmethod
    def from_json(cls, doc):
        try:
            dims = doc["dim_gauge"], doc["dim_matter"]
            coupling = to_fraction(doc.get("coupling", "1"))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise DocumentError(f"malformed model document: {exc!r}") from None
        if not all(isinstance(d, int) for d in dims):
            raise DocumentError("model dimensions must be integers")
        return cls(*dims, coupling)


def multi_indices(num_types, max_order, min_order=0):
    """All multi-indices with min_order <= |nu| <= max_order, graded lex order."""
    out = [nu for nu in product(range(max_order + 1), repeat=num_types)
           if min_order <= sum(nu) <= max_order]
    return sorted(out, key=grlex_key)


@dataclass(frozen=True)
class _Table:
    num_types: int
    max_order: int
    values: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        if self.num_types < 1 or self.max_order < 0:
            raise TableFormatError("need num_types >= 1 and max_order >= 0")
        clean = {}
        for key, value in dict(self.values).items():
            key = (key,) if isinstance(key, int) else tuple(key)
            if len(key) != self.num_types or any(
                    not isinstance(e, int) or e < 0 for e in key):
                raise TableFormatError(f"bad multi-index {key} for {self.num_types} types")
            if sum(key) > self.max_order:
                raise TableFormatError(f"index {key} exceeds max_order {self.max_order}")
            value = to_fraction(value)
            if value:
                clean[key] = value
        self._validate(clean)
        object.__setattr__(self, "values", MappingProxyType(clean))

    def _validate(self, clean):
        pass

    def __getitem__(self, index):
        index = (index,) if isinstance(index, int) else tuple(index)
        return self.values.get(index, Fraction(0))

    def __hash__(self):
        return hash((self.num_types, self.max_order, frozenset(self.values.items())))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.num_types, self.max_order, dict(self.values)) == \
            (other.num_types, other.max_order, dict(other.values))

    def items(self):
        return sorted(self.values.items(), key=lambda kv: grlex_key(kv[0]))

    def to_json(self):
        return {"num_types": self.num_types, "max_order": self.max_order,
                "values": [{"index": list(k), "value": format_rational(v)}
                           for k, v in self.items()]}

    @classmethod
    def from_json(cls, doc):
        try:
            values = {}
            for entry in doc["values"]:
                key = tuple(entry["index"])
                if key in values:
                    raise DocumentError(f"duplicate index {list(key)}")
                values[key] = to_fraction(entry["value"])
            num_types, max_order = doc["num_types"], doc["max_order"]
            if not isinstance(num_types, int) or not isinstance(max_order, int):
                raise DocumentError("num_types and max_order must be integers")
        except DocumentError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed table document: {exc!r}") from None
        return cls(num_types, max_order, values)


class MomentTable(_Table):
    """mu(nu) = <X_1^nu_1 ... X_d^nu_d>; missing entries are exact zeros."""

    @property
    def normalized(self):
        return self[(0,) * self.num_types] == 1


class CumulantTable(_Table):
    """kappa(nu) for nu != 0."""

    def _validate(self, clean):
        if (0,) * self.num_types in clean:
            raise TableFormatError("cumulant tables carry no entry at the zero index")


def _require_normalized(table):
    if not table.normalized:
        raise MomentPreconditionError(
            f"mu(0,...,0) = {table[(0,) * table.num_types]}, expected 1")


def _nu_factorial(nu):
    return prod(factorial(e) for e in nu)


def moment_generating_series(table):
    """M(xi) = sum_nu mu(nu) xi^nu / nu!."""
    return Series(table.num_types, table.max_order,
                  {nu: mu / _nu_factorial(nu) for nu, mu in table.values.items()})


def cumulants_from_moments_series(table):
    _require_normalized(table)
    K = log_series(moment_generating_series(table))
    return CumulantTable(table.num_types, table.max_order,
                         {nu: c * _nu_factorial(nu) for nu, c in K.coeffs.items()
                          if any(nu)})


def moments_from_cumulants(table):
    K = Series(table.num_types, table.max_order,
               {nu: k / _nu_factorial(nu) for nu, k in table.values.items()})
    M = exp_series(K)
    return MomentTable(table.num_types, table.max_order,
                       {nu: c * _nu_factorial(nu) for nu, c in M.coeffs.items()})


def _sub_vectors_desc(bound):
    """Nonzero vectors m <= bound componentwise, in decreasing lexicographic order."""
    ranges = [range(b, -1, -1) for b in bound]
    for m in product(*ranges):
        if any(m):
            yield m


@lru_cache(maxsize=None)
def vector_partitions(nu):
    """Multiset partitions of the multi-index ``nu`` into nonzero parts.

    Each partition is a tuple of (part, multiplicity) pairs with distinct
    parts in decreasing lexicographic order.
    """
    nu = tuple(nu)

    def rec(remaining, cap):
        if not any(remaining):
            yield ()
            return
        bound = tuple(remaining)
        for m in _sub_vectors_desc(bound):
            if m > cap:
                continue
            rest = tuple(r - x for r, x in zip(remaining, m))
            for tail in rec(rest, m):
                yield (m,) + tail

    result = []
    for parts in rec(nu, nu):
        grouped = []
        for m in parts:
            if grouped and grouped[-1][0] == m:
                grouped[-1][1] += 1
            else:
                grouped.append([m, 1])
        result.append(tuple((m, k) for m, k in grouped))
    return tuple(result)


def partition_cumulant(nu, moment):
    """kappa(nu) from the multiplicity form of the partition formula.

    kappa(nu) = nu! * sum over multiset partitions {m_i^(k_i)} of nu of
        (r-1)! (-1)^(r-1) prod_i mu(m_i)^k_i / (k_i! (m_i!)^k_i),
    with r = sum k_i the number of blocks.  ``moment`` maps a multi-index to mu.
    """
    total = Fraction(0)
    for parts in vector_partitions(tuple(nu)):
        r = sum(k for _, k in parts)
        term = Fraction(factorial(r - 1) * (-1) ** (r - 1))
        for m, k in parts:
            mu = moment(m)
            if not mu:
                term = 0
                break
            term *= Fraction(mu ** k, factorial(k) * _nu_factorial(m) ** k)
        total += term
    return total * _nu_factorial(nu)


def cumulants_from_moments_partition(table):
    _require_normalized(table)
    values = {nu: partition_cumulant(nu, table.__getitem__)
              for nu in multi_indices(table.num_types, table.max_order, 1)}
    return CumulantTable(table.num_types, table.max_order, values)


class Discrepancy(NamedTuple):
    index: tuple
    partition_value: Fraction
    series_value: Fraction


def compare_cumulant_methods(table):
    """First index (graded lex) where the two conversions disagree, or None."""
    by_series = cumulants_from_moments_series(table)
    by_partition = cumulants_from_moments_partition(table)
    for nu in multi_indices(table.num_types, table.max_order, 1):
        if by_partition[nu] != by_series[nu]:
            return Discrepancy(nu, by_partition[nu], by_series[nu])
    return None


def product_table(table_a, table_b, max_order):
    """Joint moments of two independent groups: mu(a, b) = mu_A(a) mu_B(b)."""
    if max_order > min(table_a.max_order, table_b.max_order):
        raise ValueError("max_order exceeds one of the input tables")
    da, db = table_a.num_types, table_b.num_types
    values = {}
    for nu in multi_indices(da + db, max_order):
        v = table_a[nu[:da]] * table_b[nu[da:]]
        if v:
            values[nu] = v
    return MomentTable(da + db, max_order, values)


def marginal(table, types):
    """Moments of the sub-vector of the listed (0-based) types."""
    types = list(types)
    values = {}
    for nu, mu in table.values.items():
        if all(e == 0 for i, e in enumerate(nu) if i not in types):
            values[tuple(nu[i] for i in types)] = mu
    return MomentTable(len(types), table.max_order, values)


def permute_types(table, perm):
    """Relabel types: new type i is old type perm[i]."""
    if sorted(perm) != list(range(table.num_types)):
        raise ValueError(f"{perm} is not a permutation of the types")
    values = {tuple(nu[p] for p in perm): v for nu, v in table.values.items()}
    return type(table)(table.num_types, table.max_order, values)


@dataclass(frozen=True)
class IndependenceReport:
    split: int
    max_order: int
    nonzero_mixed: tuple

    @property
    def independent(self):
        return not self.nonzero_mixed

    def to_json(self):
        return {"split": self.split, "max_order": self.max_order,
                "nonzero_mixed": [{"index": list(k), "value": format_rational(v)}
                                  for k, v in self.nonzero_mixed]}


def mixed_cumulants(joint, split, max_order=None):
    """Nonzero cumulants whose index touches both groups [0, split) and [split, d)."""
    _require_normalized(joint)
    if not 0 < split < joint.num_types:
        raise ValueError("split must separate two non-empty groups")
    order = joint.max_order if max_order is None else max_order
    kappa = cumulants_from_moments_series(joint)
    bad = tuple((nu, v) for nu, v in kappa.items()
                if sum(nu) <= order and any(nu[:split]) and any(nu[split:]))
    return IndependenceReport(split, order, bad)


def between_group_cumulant_audit(table_a, table_b, max_order):
    """Mixed cumulants of the independent union of two groups; should be empty."""
    _require_normalized(table_a)
    _require_normalized(table_b)
    joint = product_table(table_a, table_b, max_order)
    return mixed_cumulants(joint, table_a.num_types, max_order)
