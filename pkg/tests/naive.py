"""Independent reference implementations for cross-checks.

Everything here works on plain bit tuples with Fraction arithmetic and full
enumeration: no bit packing, no symmetry reductions, no shared code with the
package internals.  Slow on purpose.
"""

from fractions import Fraction
from itertools import product


def naive_autocorr(bits, offsets, weights):
    """Weighted sum over shifts of the product of entries at the offsets."""
    length = len(bits)
    total = Fraction(0)
    for s in range(length):
        term = Fraction(weights[s])
        for k in offsets:
            term *= bits[(k + s) % length]
        total += term
    return total


def naive_sq_diff_sum(bits1, bits2, order, kept, weights):
    """Full enumeration of the squared autocorrelation gap over kept^order."""
    total = Fraction(0)
    for tup in product(kept, repeat=order):
        gap = naive_autocorr(bits1, tup, weights) - naive_autocorr(bits2, tup, weights)
        total += gap * gap
    return total


def naive_min_order(bits1, bits2, kept, weights, max_order):
    for order in range(1, max_order + 1):
        for tup in product(kept, repeat=order):
            if naive_autocorr(bits1, tup, weights) != naive_autocorr(bits2, tup, weights):
                return order
    return None


def naive_observation_prob(bits, kept, weights, y_bits, p):
    """Mass of outcome y: mixture over shifts of p^d (1-p)^(K-d)."""
    length = len(bits)
    num_kept = len(kept)
    p = Fraction(p)
    total = Fraction(0)
    for s in range(length):
        window = [bits[(s + v) % length] for v in kept]
        dist = sum(a != b for a, b in zip(window, y_bits))
        total += Fraction(weights[s]) * p**dist * (1 - p) ** (num_kept - dist)
    return total


def naive_signed_autocorr(entries, offsets, weights):
    length = len(entries)
    total = Fraction(0)
    for s in range(length):
        term = Fraction(weights[s])
        for k in offsets:
            term *= entries[(k + s) % length]
        total += term
    return total
