"""Brute-force enumeration oracles.

Test scaffolding only: small, slow, and independent of the production code
paths they are used to cross-check.
"""

from __future__ import annotations

from typing import Sequence

from .signals import SignedSignal

MAX_FACTORS = 6
MAX_ORACLE_KEPT = 12


def weight_product_sum(signed_list: Sequence[SignedSignal]) -> int:
    """Sum over all sign vectors v of the product of signed weights W(u_i * v).

    Enumerates the full 2^K cube of v directly.  Zero whenever the number of
    factors is odd; for two factors it equals 2^K times the inner product of
    the two sign vectors.
    """
    if not signed_list:
        raise ValueError("need at least one sign vector")
    if len(signed_list) > MAX_FACTORS:
        raise ValueError(f"at most {MAX_FACTORS} factors supported")
    length = signed_list[0].length
    if any(u.length != length for u in signed_list):
        raise ValueError("sign vectors must share a length")
    if length > MAX_ORACLE_KEPT:
        raise ValueError(f"length {length} exceeds oracle cap {MAX_ORACLE_KEPT}")
    total = 0
    for vword in range(1 << length):
        v = [1 - 2 * ((vword >> j) & 1) for j in range(length)]
        prod = 1
        for u in signed_list:
            prod *= sum(ue * ve for ue, ve in zip(u.entries, v))
            if prod == 0:
                break
        total += prod
    return total
