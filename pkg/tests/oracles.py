"""Independent oracles used to freeze expected values in the tests.

These deliberately avoid the library's own fast paths: sumsets by the
double loop over pairs, difference sets by scanning a universe against the
definition, orders in cyclic groups by the n/gcd formula (and lcm of the
component formulas in products), and the sup-inf constant evaluated
directly from those.
"""

import math

from cdlab.ambient import Product, ZMod
from cdlab.extnat import INF


def naive_sumset(a, xs, ys):
    return {a.add(x, y) for x in xs for y in ys}


def naive_difference(a, side, xs, ys, universe):
    out = set()
    for z in universe:
        for y in ys:
            w = a.add(z, y) if side == "right" else a.add(y, z)
            if w in xs:
                out.add(z)
                break
    return out


def formula_ord(a, x):
    """Order by arithmetic, not by orbit enumeration."""
    if isinstance(a, ZMod):
        return a.n // math.gcd(a.n, x)
    if isinstance(a, Product):
        parts = [formula_ord(f, c) for f, c in zip(a.factors, x)]
        if any(p == INF for p in parts):
            return INF
        return math.lcm(*[int(p) for p in parts])
    if a.ord_is_infinite(x):
        return INF
    # identity-like element of an infinite built-in kind
    return 1


def brute_gamma(a, xs):
    """The sup-inf constant straight from its definition."""
    xs = list(xs)
    if len(xs) <= 1:
        return len(xs)
    best = 0
    for x0 in xs:
        if not a.is_unit(x0):
            continue
        neg = a.invert(x0)
        inner = INF
        for x in xs:
            if x == x0:
                continue
            inner = min(inner, formula_ord(a, a.add(x, neg)))
        best = max(best, inner)
    return best


def closure_by_powers(a, xs, rounds):
    """Union of the k-fold sumsets for k = 1..rounds."""
    total = set(xs)
    level = set(xs)
    for _ in range(rounds - 1):
        level = naive_sumset(a, level, xs)
        total |= level
    return total
