"""Set partitions, Bell numbers, Dobinski sums, double factorials, multinomials."""

from fractions import Fraction
from math import comb, factorial, prod
from typing import NamedTuple

DEFAULT_PARTITION_CAP = 14


class PartitionCapError(ValueError):
    pass


class CertificationError(ArithmeticError):
    """The requested precision cannot certify the Dobinski bracket."""


class SetPartition:
    """A partition of {1, ..., n}; blocks sorted internally and by their minimum.

    Stored as its restricted growth string; ``blocks`` is built on first use,
    so streaming and counting stay cheap.  The public attributes are read-only.
    """

    __slots__ = ("_rgs", "_blocks")

    def __init__(self, blocks):
        blocks = tuple(tuple(b) for b in blocks)
        seen = [x for b in blocks for x in b]
        if any(not b for b in blocks):
            raise ValueError("blocks must be non-empty")
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{len(seen)}")
        if any(list(b) != sorted(b) for b in blocks) or \
                [b[0] for b in blocks] != sorted(b[0] for b in blocks):
            raise ValueError(f"blocks {blocks} are not in canonical order")
        labels = [0] * len(seen)
        for j, block in enumerate(blocks):
            for x in block:
                labels[x - 1] = j
        self._rgs = tuple(labels)
        self._blocks = blocks

    @classmethod
    def _trusted(cls, rgs):
        obj = object.__new__(cls)
        obj._rgs = rgs
        obj._blocks = None
        return obj

    @classmethod
    def from_rgs(cls, rgs):
        rgs = tuple(rgs)
        top = -1
        for label in rgs:
            if not 0 <= label <= top + 1:
                raise ValueError(f"{rgs} is not a restricted growth string")
            top = max(top, label)
        return cls._trusted(rgs)

    @property
    def rgs(self):
        """Restricted growth string: entry i is the block index of element i+1."""
        return self._rgs

    @property
    def blocks(self):
        if self._blocks is None:
            blocks = []
            for i, label in enumerate(self._rgs, start=1):
                if label == len(blocks):
                    blocks.append([i])
                else:
                    blocks[label].append(i)
            self._blocks = tuple(map(tuple, blocks))
        return self._blocks

    @property
    def n(self):
        return len(self._rgs)

    def __len__(self):
        return max(self._rgs) + 1 if self._rgs else 0

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self._rgs == other._rgs

    def __hash__(self):
        return hash(self._rgs)

    def __repr__(self):
        return f"SetPartition(blocks={self.blocks!r})"


def restricted_growth_strings(n):
    """All restricted growth strings of length n in lexicographic order.

    a[0] = 0 and a[i] <= 1 + max(a[:i]).  Generated iteratively (Knuth 7.2.1.5,
    Algorithm H without the block-count restriction).
    """
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield tuple(a)
        j = n - 1
        while j > 0 and a[j] == b[j]:
            j -= 1
        if j == 0:
            return
        a[j] += 1
        for i in range(j + 1, n):
            a[i] = 0
            b[i] = max(b[i - 1], a[i - 1] + 1)


def set_partitions(n, cap=DEFAULT_PARTITION_CAP):
    """Lazily stream every partition of {1, ..., n} exactly once."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise PartitionCapError(f"n={n} exceeds the enumeration cap {cap}")
    for rgs in restricted_growth_strings(n):
        yield SetPartition._trusted(rgs)


def bell_numbers(n):
    """[B_0, ..., B_n] from the Bell triangle."""
    if n < 0:
        raise ValueError("n must be non-negative")
    values = [1]
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        values.append(row[0])
    return values


def bell(n):
    return bell_numbers(n)[-1]


class DobinskiBracket(NamedTuple):
    """Midpoint and half-width of a certified enclosure of B_n (dyadic rationals)."""

    approximation: Fraction
    error_bound: Fraction

    @property
    def lower(self):
        return self.approximation - self.error_bound

    @property
    def upper(self):
        return self.approximation + self.error_bound

    def brackets(self, value):
        return self.lower <= value <= self.upper


def _inv_e_bounds(bits):
    # Alternating series for 1/e: partial sums straddle the limit.
    scale = 1 << bits
    k = 0
    term = Fraction(1)
    total = Fraction(0)
    while True:
        total += term if k % 2 == 0 else -term
        k += 1
        term /= k
        if term * scale < 1:
            nxt = total + (term if k % 2 == 0 else -term)
            lo, hi = min(total, nxt), max(total, nxt)
            return (lo.numerator * scale) // lo.denominator, \
                -((-hi.numerator * scale) // hi.denominator)


def dobinski_partial(n, J, precision_bits=64):
    """Certified enclosure of B_n from e^-1 * sum_{j<=J} j^n / j!.

    Arithmetic is fixed-point binary with ``precision_bits`` fractional bits
    and directed rounding; the tail sum_{j>J} j^n/j! is bounded by 2 J^n/J!,
    valid for J >= 2n.
    """
    if n < 0 or J < 1:
        raise ValueError("need n >= 0 and J >= 1")
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    if J < 2 * n:
        raise CertificationError(f"tail bound needs J >= 2n (J={J}, n={n})")
    scale = 1 << precision_bits
    s_lo = s_hi = 0
    for j in range(J + 1):
        num, den = j ** n * scale, factorial(j)
        q, r = divmod(num, den)
        s_lo += q
        s_hi += q + (1 if r else 0)
    tail_num, tail_den = 2 * J ** n * scale, factorial(J)
    tail_hi = -(-tail_num // tail_den)
    e_lo, e_hi = _inv_e_bounds(precision_bits)
    # products carry scale**2; round outward back to scale
    lo = (s_lo * e_lo) // scale
    hi = -(-((s_hi + tail_hi) * e_hi) // scale)
    lower = Fraction(lo, scale)
    upper = Fraction(hi, scale)
    bracket = DobinskiBracket((lower + upper) / 2, (upper - lower) / 2)
    if bracket.error_bound >= Fraction(1, 2):
        raise CertificationError(
            f"precision {precision_bits} bits leaves half-width {float(bracket.error_bound)}")
    return bracket


def double_factorial(n):
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError("double factorial defined for n >= -1")
    return prod(range(n, 0, -2))


def multinomial(counts):
    counts = list(counts)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    result = 1
    running = 0
    for c in counts:
        running += c
        result *= comb(running, c)
    return result
