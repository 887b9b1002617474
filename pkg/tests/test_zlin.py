import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfk.zlin import (
    AbMap,
    FinitePoset,
    IntLattice,
    Lattice,
    PresentedAb,
    direct_sum_ab,
    hnf_basis,
    left_kernel,
    map_calculus,
    poset_mobius,
    smith_invariants,
    sub_quotient_invariants,
    xgcd,
)


def brute_span_points(rows, bound, coeff_bound=3):
    """All lattice points with coordinates in [-bound, bound], by brute force
    over small integer combinations.  Only valid when entries are small."""
    pts = set()
    for coeffs in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=len(rows)):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(len(rows[0])))
        if all(abs(x) <= bound for x in v):
            pts.add(v)
    return pts


def test_xgcd():
    for a, b in [(0, 0), (4, 6), (-4, 6), (7, 0), (0, -5), (12, 18)]:
        g, x, y = xgcd(a, b)
        assert g == x * a + y * b
        assert g >= 0
        if a or b:
            assert a % g == 0 and b % g == 0


def test_hnf_example_from_small_vectors():
    lat = hnf_basis([[2, 0], [0, 2], [1, 1]])
    assert lat.basis == ((1, 1), (0, 2))
    # span comparison: brute-forced points of the input span all belong to
    # the HNF lattice, and each HNF row is a small combination of the inputs
    for p in brute_span_points([[2, 0], [0, 2], [1, 1]], 4):
        assert lat.contains(p)
    for row in lat.basis:
        assert row in brute_span_points([[2, 0], [0, 2], [1, 1]], 6, coeff_bound=4)


def test_hnf_empty_and_identity():
    assert hnf_basis([], ambient=3).basis == ()
    assert hnf_basis([[1, 0], [0, 1]]).basis == ((1, 0), (0, 1))


def test_hnf_idempotent_and_membership_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(0, 6))]
        lat = hnf_basis(rows, ambient=n)
        again = hnf_basis(lat.basis, ambient=n)
        assert lat == again
        for r in rows:
            assert lat.contains(r)


def test_int_lattice_coordinates_roundtrip():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 4))]
        lat = IntLattice(n, rows)
        for _ in range(5):
            cs = [rng.randint(-3, 3) for _ in lat.rows]
            v = [sum(c * row[j] for c, row in zip(cs, lat.rows)) for j in range(n)]
            got = lat.coordinates(v)
            assert got is not None
            assert [sum(c * row[j] for c, row in zip(got, lat.rows)) for j in range(n)] == v


def test_smith_small():
    assert smith_invariants([[2]]) == [2]
    assert smith_invariants([[1, 0], [0, 2]]) == [1, 2]
    assert smith_invariants([[0, 0], [0, 0]]) == [0, 0]
    assert smith_invariants([[2, 4], [6, 8]]) == [2, 4]


def unimodular(n, rng, steps=6):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(n):
            m[i][k] += c * m[j][k]
    return m


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def test_smith_invariant_under_unimodular():
    rng = random.Random(11)
    for _ in range(25):
        n = 4
        d = [rng.choice([1, 1, 2, 2, 4, 6, 0]) for _ in range(n)]
        # build a matrix with known construction, then disguise it
        diag = [[d[i] if i == j else 0 for j in range(n)] for i in range(n)]
        u, v = unimodular(n, rng), unimodular(n, rng)
        m = matmul(matmul(u, diag), v)
        got = [x for x in smith_invariants(m)]
        # reference invariants: sort the nonzero part into a divisibility chain
        want = smith_invariants(diag)
        assert got == want


def test_sub_quotient_invariants():
    z2 = hnf_basis([[1, 0], [0, 1]])
    two_z2 = hnf_basis([[2, 0], [0, 2]])
    assert sub_quotient_invariants(two_z2, z2) == [2, 2]
    assert sub_quotient_invariants(z2, z2) == []
    with pytest.raises(ValueError):
        sub_quotient_invariants(z2, two_z2)


def test_sub_quotient_brute_force_small():
    # cross-check quotient structure against elementary divisors of the
    # coordinate matrix computed by an independent route: |B/A| counting
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 3)
        b_rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n + 1)]
        sup = hnf_basis(b_rows, ambient=n)
        if sup.rank == 0:
            continue
        mults = [rng.randint(1, 3) for _ in range(sup.rank)]
        sub_rows = [[m * x for x in row] for m, row in zip(mults, sup.basis)]
        sub = hnf_basis(sub_rows, ambient=n)
        inv = sub_quotient_invariants(sub, sup)
        assert all(d > 1 for d in inv)
        order = 1
        for d in inv:
            order *= d
        want = 1
        for m in mults:
            want *= m
        assert order == want


def test_left_kernel():
    rows = [[1, 2], [2, 4], [0, 1]]
    ker = left_kernel(rows)
    assert len(ker) == 1
    x = ker[0]
    assert [x[0] * 1 + x[1] * 2 + x[2] * 0, x[0] * 2 + x[1] * 4 + x[2] * 1] == [0, 0]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=5))
def test_left_kernel_property(rows):
    ker = left_kernel(rows)
    for x in ker:
        prod = [sum(c * r[j] for c, r in zip(x, rows)) for j in range(3)]
        assert prod == [0, 0, 0]


def test_presented_ab():
    assert PresentedAb(1, [[2]]).invariants() == [2]
    assert PresentedAb(2, [[1, 0], [0, 2]]).invariants() == [2]
    assert PresentedAb(2, []).invariants() == [0, 0]
    assert PresentedAb(0, []).is_trivial()
    assert PresentedAb(1, [[1]]).is_trivial()
    assert PresentedAb(3, [[2, 0, 0]]).invariants() == [2, 0, 0]
    assert PresentedAb(1, [[4], [6]]).invariants() == [2]


def test_direct_sum_ab():
    g = direct_sum_ab([PresentedAb(1, [[2]]), PresentedAb(1, []), PresentedAb(1, [[3]])])
    assert g.invariants() == [2, 3, 0] or g.invariants() == [6, 0]
    # normalized form multiplies coprime torsion into one factor
    assert sorted(g.torsion) in ([2, 3], [6])
    assert g.free_rank == 1


def test_ab_map_identity_on_z2_is_iso():
    z2 = PresentedAb(1, [[2]])
    f = AbMap(z2, z2, [[1]])
    assert f.is_iso()


def test_ab_map_mult_by_2_on_z():
    z = PresentedAb(1, [])
    f = AbMap(z, z, [[2]])
    calc = map_calculus(f)
    assert calc.kernel.is_trivial()
    assert calc.cokernel.invariants() == [2]
    assert not calc.is_iso


def test_ab_map_projection_kernel():
    # Z^2 -> Z/4, (a, b) -> a + 2b mod 4
    src = PresentedAb(2, [])
    tgt = PresentedAb(1, [[4]])
    f = AbMap(src, tgt, [[1], [2]])
    calc = map_calculus(f)
    assert calc.cokernel.is_trivial()
    assert calc.kernel.invariants() == [0, 0]
    # kernel lattice is generated by (4,0) and (2,1) up to basis choice
    klat = hnf_basis(calc.kernel_gens, ambient=2)
    assert klat == hnf_basis([[4, 0], [2, 1]])


def test_ab_map_ill_defined_rejected():
    src = PresentedAb(1, [[2]])
    tgt = PresentedAb(1, [[3]])
    with pytest.raises(ValueError):
        AbMap(src, tgt, [[1]])


def test_poset_mobius_chain_and_klein():
    chain = FinitePoset([0, 1], lambda a, b: a <= b)
    assert poset_mobius(chain, 0, 1) == -1
    assert poset_mobius(chain, 0, 0) == 1

    # subgroup poset of Cp x Cp: bottom, p+1 atoms, top
    for p in (2, 3):
        elems = ["bot"] + [f"a{i}" for i in range(p + 1)] + ["top"]

        def leq(a, b):
            return a == b or a == "bot" or b == "top"

        poset = FinitePoset(elems, leq)
        assert poset.mobius("bot", "top") == p
        total = sum(poset.mobius("bot", c) for c in elems if leq("bot", c) and leq(c, "top"))
        assert total == 0


def test_poset_mobius_sum_identity_random():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(2, 7)
        # random poset from a random DAG via reachability
        edges = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4}
        leq = [[i == j for j in range(n)] for i in range(n)]
        for i, j in sorted(edges):
            leq[i][j] = True
        # transitive closure
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    for j in range(n):
                        if leq[k][j]:
                            leq[i][j] = True
        poset = FinitePoset(list(range(n)), leq)
        for a in range(n):
            for b in range(n):
                if a != b and leq[a][b]:
                    s = sum(poset.mobius(a, c) for c in range(n) if leq[a][c] and leq[c][b])
                    assert s == 0
