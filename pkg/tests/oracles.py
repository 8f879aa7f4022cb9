"""Brute-force references for the test-suite.

Nothing here imports the code paths it is used to check.
"""

from collections import deque
from fractions import Fraction
from math import comb, factorial


def bell_binomial(n):
    """B_0..B_n from B_(m+1) = sum_k C(m, k) B_k."""
    b = [1]
    for m in range(n):
        b.append(sum(comb(m, k) * b[k] for k in range(m + 1)))
    return b


def partitions_by_insertion(elements):
    """Set partitions built by inserting each element into an existing block or a new one."""
    elements = list(elements)
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for smaller in partitions_by_insertion(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def perfect_matchings(items):
    items = list(items)
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield [(a, items[i])] + m


def connected_bfs(n, pairs):
    if n <= 1:
        return True
    adj = {v: set() for v in range(n)}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x] - seen:
            seen.add(y)
            queue.append(y)
    return len(seen) == n


def one_pi_by_removal(n, pairs):
    """No single edge whose deletion disconnects the graph."""
    return all(connected_bfs(n, pairs[:i] + pairs[i + 1:]) for i in range(len(pairs)))


def labeled_connected_multigraphs(max_edges, max_vertices):
    """Count by multiplicity matrices: (V, E) -> sorted list of edge multisets."""
    def vectors(length, budget):
        if length == 0:
            yield ()
            return
        for m in range(budget + 1):
            for tail in vectors(length - 1, budget - m):
                yield (m,) + tail

    out = {}
    for nv in range(1, max_vertices + 1):
        slots = [(i, j) for i in range(nv) for j in range(i, nv)]
        for mult in vectors(len(slots), max_edges):
            ne = sum(mult)
            if ne < 1:
                continue
            pairs = [s for s, m in zip(slots, mult) for _ in range(m)]
            touched = {x for p in pairs for x in p}
            if len(touched) == nv and connected_bfs(nv, pairs):
                out.setdefault((nv, ne), []).append(tuple(sorted(pairs)))
    return out


def cumulant_by_set_partitions(nu, moment):
    """kappa over labeled set partitions of the multiset of type labels.

    kappa = sum_pi (|pi|-1)! (-1)^(|pi|-1) prod_B mu(types in B).
    """
    labels = [j for j, e in enumerate(nu) for _ in range(e)]
    total = Fraction(0)
    for blocks in partitions_by_insertion(range(len(labels))):
        r = len(blocks)
        term = Fraction(factorial(r - 1) * (-1) ** (r - 1))
        for block in blocks:
            m = [0] * len(nu)
            for pos in block:
                m[labels[pos]] += 1
            term *= moment(tuple(m))
        total += term
    return total


def taylor_coefficients(expr_builder, order):
    """Taylor coefficients at 0 via sympy (univariate)."""
    import sympy

    x = sympy.Symbol("x")
    expr = expr_builder(x, sympy)
    poly = sympy.series(expr, x, 0, order + 1).removeO()
    return [Fraction(str(sympy.nsimplify(poly.coeff(x, k)))) for k in range(order + 1)]
