import random
from fractions import Fraction as F
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cumulant_by_set_partitions
from rptkit.combinatorics import bell
from rptkit.cumulants import (CumulantTable, ModelSpec, MomentPreconditionError, MomentTable,
                              TableFormatError, between_group_cumulant_audit,
                              compare_cumulant_methods, cumulants_from_moments_partition,
                              cumulants_from_moments_series, marginal, mixed_cumulants,
                              moments_from_cumulants, multi_indices, partition_cumulant,
                              permute_types, product_table, vector_partitions)
from rptkit.errors import DocumentError

GAUSSIAN = MomentTable(1, 4, {0: 1, 2: 1, 4: 3})


def random_table(rng, dim, order, density=1.0):
    values = {(0,) * dim: 1}
    for nu in multi_indices(dim, order, 1):
        if rng.random() < density:
            values[nu] = F(rng.randint(-9, 9), rng.randint(1, 5))
    return MomentTable(dim, order, values)


class TestSeriesRoute:
    def test_gaussian(self):
        k = cumulants_from_moments_series(GAUSSIAN)
        assert dict(k.values) == {(2,): 1}

    def test_trivial_moments(self):
        k = cumulants_from_moments_series(MomentTable(2, 5, {(0, 0): 1}))
        assert dict(k.values) == {}

    def test_exponential_mgf(self):
        k = cumulants_from_moments_series(MomentTable(1, 4, {n: 1 for n in range(5)}))
        assert dict(k.values) == {(1,): 1}

    def test_unnormalized(self):
        with pytest.raises(MomentPreconditionError):
            cumulants_from_moments_series(MomentTable(1, 2, {0: 2, 1: 1}))
        with pytest.raises(MomentPreconditionError):
            cumulants_from_moments_series(MomentTable(1, 2, {1: 1}))


class TestPartitionRoute:
    def test_first_order(self):
        t = MomentTable(1, 1, {0: 1, 1: F(3, 7)})
        assert cumulants_from_moments_partition(t)[1] == F(3, 7)

    def test_variance(self):
        t = MomentTable(1, 2, {0: 1, 1: F(2, 3), 2: 5})
        assert cumulants_from_moments_partition(t)[2] == 5 - F(4, 9)
        assert cumulants_from_moments_series(t)[2] == 5 - F(4, 9)

    def test_covariance(self):
        t = MomentTable(2, 2, {(0, 0): 1, (1, 0): 2, (0, 1): -3, (1, 1): F(1, 2)})
        expected = F(1, 2) - 2 * -3
        assert cumulants_from_moments_partition(t)[1, 1] == expected
        assert cumulants_from_moments_series(t)[1, 1] == expected

    def test_gaussian(self):
        assert cumulants_from_moments_partition(GAUSSIAN) == \
            cumulants_from_moments_series(GAUSSIAN)

    def test_unnormalized(self):
        with pytest.raises(MomentPreconditionError):
            cumulants_from_moments_partition(MomentTable(1, 2, {0: 0}))

    def test_vector_partition_counts(self):
        # integer partitions p(n) and the number of factorizations of 12 = 2^2 * 3
        assert [len(vector_partitions((n,))) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]
        assert len(vector_partitions((2, 1))) == 4
        assert len(vector_partitions((1, 1, 1))) == bell(3)

    def test_literal_denominator_differs(self):
        """Dropping the k_i power on the block factorials breaks the formula at nu=(4)."""
        def literal(nu, moment):
            total = F(0)
            for parts in vector_partitions(nu):
                r = sum(k for _, k in parts)
                term = F(factorial(r - 1) * (-1) ** (r - 1))
                for m, k in parts:
                    term *= F(moment(m) ** k, factorial(k) * prod(map(factorial, m)))
                total += term
            return total * prod(map(factorial, nu))

        mu = GAUSSIAN.__getitem__
        assert partition_cumulant((4,), mu) == 0
        assert literal((4,), mu) == -3


class TestThreeRoutesAgree:
    @pytest.mark.parametrize("seed", range(12))
    def test_against_set_partition_oracle(self, seed):
        rng = random.Random(seed)
        t = random_table(rng, rng.randint(1, 3), rng.randint(1, 4))
        series = cumulants_from_moments_series(t)
        for nu in multi_indices(t.num_types, t.max_order, 1):
            assert series[nu] == cumulant_by_set_partitions(nu, t.__getitem__)
            assert partition_cumulant(nu, t.__getitem__) == series[nu]


class TestInverse:
    def test_gaussian_moments(self):
        m = moments_from_cumulants(CumulantTable(1, 4, {2: 1}))
        assert (m[2], m[3], m[4]) == (1, 0, 3)

    def test_zero_cumulants(self):
        m = moments_from_cumulants(CumulantTable(2, 4, {}))
        assert dict(m.values) == {(0, 0): 1}

    def test_unit_cumulants_give_bell(self):
        m = moments_from_cumulants(CumulantTable(1, 8, {n: 1 for n in range(1, 9)}))
        assert [m[n] for n in range(9)] == [bell(n) for n in range(9)]

    def test_cumulant_table_rejects_zero_index(self):
        with pytest.raises(TableFormatError):
            CumulantTable(1, 2, {0: 1})


class TestCompare:
    def test_gaussian(self):
        assert compare_cumulant_methods(GAUSSIAN) is None

    @pytest.mark.parametrize("seed", range(100))
    def test_random_dim2_order5(self, seed):
        rng = random.Random(1000 + seed)
        assert compare_cumulant_methods(random_table(rng, 2, 5, density=0.7)) is None

    def test_precondition_not_discrepancy(self):
        with pytest.raises(MomentPreconditionError):
            compare_cumulant_methods(MomentTable(1, 3, {0: 3}))


class TestIndependence:
    def test_two_univariate(self):
        rng = random.Random(5)
        a, b = random_table(rng, 1, 4), random_table(rng, 1, 4)
        report = between_group_cumulant_audit(a, b, 4)
        assert report.independent and report.nonzero_mixed == ()

    def test_trivial_b(self):
        rng = random.Random(6)
        a = random_table(rng, 2, 4)
        b = MomentTable(1, 4, {0: 1})
        assert between_group_cumulant_audit(a, b, 4).independent

    def test_correlated_pair_reported(self):
        joint = MomentTable(2, 2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 3})
        report = mixed_cumulants(joint, 1)
        assert not report.independent
        assert report.nonzero_mixed[0] == ((1, 1), 2)

    def test_converse_factorization(self):
        """Vanishing mixed cumulants force the moments to factorize."""
        rng = random.Random(11)
        kappa = {}
        for nu in multi_indices(3, 5, 1):
            if not (any(nu[:1]) and any(nu[1:])):
                kappa[nu] = F(rng.randint(-4, 4), rng.randint(1, 3))
        joint = moments_from_cumulants(CumulantTable(3, 5, kappa))
        a, b = marginal(joint, [0]), marginal(joint, [1, 2])
        assert product_table(a, b, 5) == joint


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.permutations(range(3)))
def test_permutation_commutes(seed, perm):
    t = random_table(random.Random(seed), 3, 4, density=0.6)
    perm = list(perm)
    assert cumulants_from_moments_series(permute_types(t, perm)) == \
        permute_types(cumulants_from_moments_series(t), perm)
    assert cumulants_from_moments_partition(permute_types(t, perm)) == \
        permute_types(cumulants_from_moments_partition(t), perm)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    t = random_table(rng, rng.randint(1, 3), rng.randint(0, 6), density=0.5)
    assert moments_from_cumulants(cumulants_from_moments_series(t)) == t


def test_json_round_trip():
    rng = random.Random(3)
    t = random_table(rng, 2, 3)
    assert MomentTable.from_json(t.to_json()) == t
    k = cumulants_from_moments_series(t)
    assert CumulantTable.from_json(k.to_json()) == k


def test_json_malformed():
    with pytest.raises(DocumentError):
        MomentTable.from_json({"num_types": 1, "values": []})
    with pytest.raises(DocumentError):
        MomentTable.from_json({"num_types": 1, "max_order": 2,
                               "values": [{"index": [0], "value": "1.5"}]})
    with pytest.raises(DocumentError):
        MomentTable.from_json({"num_types": 1, "max_order": 2,
                               "values": [{"index": [0], "value": "1"},
                                          {"index": [0], "value": "1"}]})


def test_model_spec():
    m = ModelSpec(3, 2, F(1, 2))
    assert m.num_types == 5
    assert ModelSpec.from_json(m.to_json()) == m
    with pytest.raises(ValueError):
        ModelSpec(0, 1)
