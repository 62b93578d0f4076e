"""Nonabelian table fixtures: S3, D4 and Q8 as verified cayley ambients.

The tables are generated from explicit permutation and quaternion
arithmetic, then pushed through the ordinary table constructor, whose
exhaustive axiom scan double-checks them.  Element order is fixed so that
indices in tests and reports are stable.
"""

from .ambient import Ambient, make_ambient


def _compose(a, b):
    """Permutation a after b, as mapping tuples."""
    return tuple(a[b[i]] for i in range(len(b)))


def _perm_table(perms):
    index = {p: i for i, p in enumerate(perms)}
    return [[index[_compose(p, q)] for q in perms] for p in perms]


def s3() -> Ambient:
    """Symmetric group on three points, elements ordered
    e, (12), (13), (23), (123), (132)."""
    perms = [
        (0, 1, 2),
        (1, 0, 2),
        (2, 1, 0),
        (0, 2, 1),
        (1, 2, 0),
        (2, 0, 1),
    ]
    labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
    return make_ambient({"kind": "cayley", "labels": labels, "table": _perm_table(perms)})


def d4() -> Ambient:
    """Dihedral group of the square: rotations r^k then reflections r^k s."""
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    e = (0, 1, 2, 3)
    r2 = _compose(r, r)
    r3 = _compose(r2, r)
    perms = [e, r, r2, r3, s, _compose(r, s), _compose(r2, s), _compose(r3, s)]
    labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
    return make_ambient({"kind": "cayley", "labels": labels, "table": _perm_table(perms)})


_Q8_BASIS = {
    ("e", "e"): (1, "e"), ("e", "i"): (1, "i"), ("e", "j"): (1, "j"), ("e", "k"): (1, "k"),
    ("i", "e"): (1, "i"), ("i", "i"): (-1, "e"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "e"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "e"), ("j", "k"): (1, "i"),
    ("k", "e"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "e"),
}


def q8() -> Ambient:
    """Quaternion group, elements ordered 1, -1, i, -i, j, -j, k, -k."""
    elems = [
        (1, "e"), (-1, "e"), (1, "i"), (-1, "i"),
        (1, "j"), (-1, "j"), (1, "k"), (-1, "k"),
    ]
    index = {q: n for n, q in enumerate(elems)}

    def mul(p, q):
        sign, axis = _Q8_BASIS[(p[1], q[1])]
        return (sign * p[0] * q[0], axis)

    table = [[index[mul(p, q)] for q in elems] for p in elems]
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return make_ambient({"kind": "cayley", "labels": labels, "table": table})


def left_zero_band(n: int = 2) -> Ambient:
    """x + y = x for all y: associative but not cancellative, no identity."""
    table = [[i] * n for i in range(n)]
    return make_ambient({"kind": "cayley", "table": table})
