import random

import pytest

import oracles
from cdlab import (
    FinSet,
    INF,
    center,
    difference,
    generated,
    generated_sym,
    is_commutative_generated,
    iterated_sumset,
    make_ambient,
    ord_elem,
    ord_set,
    sumset,
    sumset_size,
    units_of,
)
from cdlab.errors import AmbientMismatch
from cdlab import fixtures

Z4 = make_ambient({"kind": "zmod", "n": 4})
Z5 = make_ambient({"kind": "zmod", "n": 5})
Z6 = make_ambient({"kind": "zmod", "n": 6})
NAT = make_ambient({"kind": "nat_lattice", "dim": 1})
FM = make_ambient({"kind": "free_monoid", "alphabet": ["a", "b"]})
S3 = fixtures.s3()


def test_finset_canonical():
    s = FinSet(Z6, [4, 1, 4, 0])
    assert s.elements == (0, 1, 4)
    assert s == FinSet(Z6, (1, 0, 4))
    assert len(s) == 3 and 4 in s and 2 not in s
    assert s.to_json() == [0, 1, 4]
    assert FinSet.from_json(Z6, [4, 1, 0]) == s
    words = FinSet(FM, ["ba", "a", "", "ab"])
    assert words.elements == ("", "a", "ab", "ba")  # by length then text


def test_finset_mask_round_trip():
    s = FinSet(Z6, [0, 2, 5])
    assert s.mask == 0b100101
    assert FinSet.from_mask(Z6, s.mask) == s


def test_sumset_examples():
    assert sumset(FinSet(Z5, [0, 1]), FinSet(Z5, [0, 1])).elements == (0, 1, 2)
    assert sumset(FinSet(Z5, [0, 1]), FinSet(Z5, [])).elements == ()
    assert sumset(FinSet(FM, [""]), FinSet(FM, ["a", "bb"])).elements == ("a", "bb")
    with pytest.raises(AmbientMismatch):
        sumset(FinSet(Z5, [0]), FinSet(Z6, [0]))


def test_iterated_sumset_examples():
    assert iterated_sumset(2, FinSet(Z4, [0, 2])).elements == (0, 2)
    x = FinSet(Z5, [1, 3])
    assert iterated_sumset(1, x) == x
    assert iterated_sumset(2, FinSet(FM, ["a"])).elements == ("aa",)
    with pytest.raises(ValueError):
        iterated_sumset(0, x)


def test_difference_examples():
    assert difference("right", FinSet(Z6, [1]), FinSet(Z6, [2])).elements == (5,)
    assert difference("right", FinSet(NAT, [(3,)]), FinSet(NAT, [(5,)])).elements == ()
    # group case: X - {y} is the translate by the inverse
    X = FinSet(Z6, [1, 3, 4])
    y = 5
    expect = tuple(sorted((x + Z6.invert(y)) % 6 for x in X))
    assert difference("right", X, FinSet(Z6, [y])).elements == expect


def test_difference_against_definition_scan():
    rng = random.Random(31)
    for a in (Z6, S3, fixtures.left_zero_band(3)):
        universe = a.carrier()
        for _ in range(150):
            xs = {u for u in universe if rng.random() < 0.4}
            ys = {u for u in universe if rng.random() < 0.4}
            for side in ("right", "left"):
                got = set(difference(side, FinSet(a, xs), FinSet(a, ys)).elements)
                want = oracles.naive_difference(a, side, xs, ys, universe)
                assert got == want


def test_generated_examples():
    res = generated(FinSet(Z6, [2]))
    assert res.closure.elements == (0, 2, 4) and res.complete
    res = generated(FinSet(NAT, [(1,)]), budget=10)
    assert not res.complete
    assert res.closure.elements == tuple((k,) for k in range(1, 11))
    assert res.budget_used == 10
    res = generated_sym(FinSet(Z5, [1]))
    assert res.closure.elements == (0, 1, 2, 3, 4) and res.complete
    empty = generated(FinSet(Z5, []))
    assert empty.complete and empty.closure.elements == ()


def test_generated_matches_power_union():
    rng = random.Random(123)
    for a in (Z6, S3):
        for _ in range(60):
            xs = {x for x in a.carrier() if rng.random() < 0.5}
            if not xs:
                continue
            got = set(generated(FinSet(a, xs)).closure.elements)
            want = oracles.closure_by_powers(a, xs, a.carrier_size + 1)
            assert got == want


def test_ord_examples():
    assert ord_elem(Z6, 2) == 3
    assert ord_elem(Z6, 0) == 1
    assert ord_elem(NAT, (1,)) == INF
    assert ord_set(FinSet(Z6, [2])) == 3
    assert ord_set(FinSet(NAT, [(0,), (2,)])) == INF
    assert ord_set(FinSet(Z5, [])) == 0
    assert ord_set(FinSet(FM, [""])) == 1
    assert ord_set(FinSet(FM, ["ab"])) == INF


def test_ord_matches_formula():
    rng = random.Random(7)
    p = make_ambient(
        {"kind": "product", "factors": [{"kind": "zmod", "n": 6}, {"kind": "zmod", "n": 4}]}
    )
    for a in (Z4, Z5, Z6, p):
        for _ in range(200):
            x = a.carrier()[rng.randrange(a.carrier_size)]
            assert ord_elem(a, x) == oracles.formula_ord(a, x)


def test_center_examples():
    assert center(FinSet(S3, [1])).elements == (0, 1)
    assert center(FinSet(S3, range(6))).elements == (0,)
    cands = FinSet(Z6, [1, 3])
    assert center(FinSet(Z6, [2]), cands) == cands  # commutative ambient


def test_units_of_examples():
    X = FinSet(Z6, [1, 5])
    assert units_of(X) is X
    assert units_of(FinSet(NAT, [(0,), (3,)])).elements == ((0,),)
    assert units_of(FinSet(FM, ["a", "b"])).elements == ()


def test_is_commutative_generated():
    assert is_commutative_generated(FinSet(S3, [0, 1]))
    assert not is_commutative_generated(FinSet(S3, [1, 2]))
    assert is_commutative_generated(FinSet(S3, [4]))
    assert is_commutative_generated(FinSet(S3, []))
    assert is_commutative_generated(FinSet(Z6, [1, 2, 3]))


def test_commutative_generated_matches_closure_check():
    # pairwise commuting generators iff the whole closure commutes
    rng = random.Random(2024)
    for a in (S3, fixtures.d4(), fixtures.q8()):
        for _ in range(120):
            xs = {x for x in a.carrier() if rng.random() < 0.4}
            pairwise = is_commutative_generated(FinSet(a, xs))
            clo = generated(FinSet(a, xs)).closure.elements
            direct = all(a.add(u, v) == a.add(v, u) for u in clo for v in clo)
            assert pairwise == direct


def test_cancellable_translation_preserves_size():
    # |z + X| = |X + z| = |X| for every z in a cancellative finite ambient
    rng = random.Random(11)
    for a in (Z6, S3):
        for _ in range(100):
            xs = {x for x in a.carrier() if rng.random() < 0.5}
            z = a.carrier()[rng.randrange(a.carrier_size)]
            X = FinSet(a, xs)
            assert len(sumset(X, FinSet(a, [z]))) == len(xs)
            assert len(sumset(FinSet(a, [z]), X)) == len(xs)


def test_sumset_lower_bound_by_max():
    rng = random.Random(12)
    for a in (Z6, S3, NAT):
        for _ in range(100):
            if a is NAT:
                xs = {(rng.randrange(20),) for _ in range(rng.randrange(1, 6))}
                ys = {(rng.randrange(20),) for _ in range(rng.randrange(1, 6))}
            else:
                xs = {x for x in a.carrier() if rng.random() < 0.5} or {a.identity}
                ys = {x for x in a.carrier() if rng.random() < 0.5} or {a.identity}
            assert sumset_size(FinSet(a, xs), FinSet(a, ys)) >= max(len(xs), len(ys))


def test_finite_order_element_yields_identity():
    # n copies of a cancellable z of order n sum to the identity
    for a, z in ((Z6, 2), (Z6, 5), (S3, 1), (S3, 4)):
        n = ord_elem(a, z)
        power = iterated_sumset(n, FinSet(a, [z]))
        assert power.elements == (a.identity,)


def test_center_inverse_and_commutative_difference():
    # units in the center of X keep their inverses in the center, and
    # X - z stays commutative-generated when X is
    rng = random.Random(13)
    a = S3
    for _ in range(200):
        xs = {x for x in a.carrier() if rng.random() < 0.4}
        X = FinSet(a, xs)
        for z in center(X).elements:
            if not a.is_unit(z):
                continue
            assert a.invert(z) in center(X).elements
            if is_commutative_generated(X):
                shifted = difference("right", X, FinSet(a, [z]))
                assert is_commutative_generated(shifted)


def test_units_distribute_over_sumsets():
    # in a cancellative monoid the units of a sumset are exactly the
    # sums of units, and inversion reverses the order
    rng = random.Random(14)
    for a in (Z6, S3):
        for _ in range(150):
            xs = {x for x in a.carrier() if rng.random() < 0.5}
            ys = {x for x in a.carrier() if rng.random() < 0.5}
            X, Y = FinSet(a, xs), FinSet(a, ys)
            left = sumset(units_of(X), units_of(Y))
            right = units_of(sumset(X, Y))
            assert left == right
    nat = NAT
    for _ in range(150):
        xs = {(rng.randrange(8),) for _ in range(rng.randrange(1, 5))}
        ys = {(rng.randrange(8),) for _ in range(rng.randrange(1, 5))}
        X, Y = FinSet(nat, xs), FinSet(nat, ys)
        assert sumset(units_of(X), units_of(Y)) == units_of(sumset(X, Y))


def test_inverse_of_sum_reverses():
    rng = random.Random(15)
    a = S3
    for _ in range(200):
        x1 = rng.randrange(6)
        x2 = rng.randrange(6)
        assert a.invert(a.add(x1, x2)) == a.add(a.invert(x2), a.invert(x1))


def test_sumset_distributes_over_union():
    rng = random.Random(16)
    for a in (Z6, S3):
        for _ in range(100):
            xs = {x for x in a.carrier() if rng.random() < 0.4}
            xs2 = {x for x in a.carrier() if rng.random() < 0.4}
            ys = {x for x in a.carrier() if rng.random() < 0.4}
            lhs = sumset(FinSet(a, xs | xs2), FinSet(a, ys))
            rhs = set(sumset(FinSet(a, xs), FinSet(a, ys)).elements) | set(
                sumset(FinSet(a, xs2), FinSet(a, ys)).elements
            )
            assert set(lhs.elements) == rhs


def test_bitmask_sumset_equals_naive():
    rng = random.Random(17)
    # exhaustive on small cyclic groups
    for n in range(1, 7):
        a = make_ambient({"kind": "zmod", "n": n})
        full = 1 << n
        for mx in range(full):
            X = FinSet.from_mask(a, mx)
            for my in range(full):
                Y = FinSet.from_mask(a, my)
                got = set(sumset(X, Y).elements)
                assert got == oracles.naive_sumset(a, X.elements, Y.elements)
    # sampled on the rest up to 16
    for n in range(7, 17):
        a = make_ambient({"kind": "zmod", "n": n})
        for _ in range(300):
            xs = {x for x in range(n) if rng.random() < 0.5}
            ys = {x for x in range(n) if rng.random() < 0.5}
            got = set(sumset(FinSet(a, xs), FinSet(a, ys)).elements)
            assert got == oracles.naive_sumset(a, xs, ys)


def test_table_ambient_sumset_equals_naive():
    rng = random.Random(18)
    p = make_ambient(
        {"kind": "product", "factors": [{"kind": "zmod", "n": 3}, {"kind": "zmod", "n": 4}]}
    )
    for a in (S3, fixtures.q8(), p):
        for _ in range(200):
            xs = {x for x in a.carrier() if rng.random() < 0.4}
            ys = {x for x in a.carrier() if rng.random() < 0.4}
            got = set(sumset(FinSet(a, xs), FinSet(a, ys)).elements)
            assert got == oracles.naive_sumset(a, xs, ys)
            assert sumset_size(FinSet(a, xs), FinSet(a, ys)) == len(got)
