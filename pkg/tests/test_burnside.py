import numpy as np
import pytest

from bfk.burnside import (
    BurnsideElement,
    cyclic_class_indices,
    cyclic_marks,
    decompose_action,
    element_of_subgroup,
    epsilon_element,
    from_vector,
    kernel_lattice,
    marks_matrix,
    marks_of,
    transitive_element,
)
from bfk.errors import InvalidParametersError
from bfk.groups import build_group, projective_plane_data


def coset_action(g, members):
    """Left multiplication action of g on cosets of the given subgroup."""
    import numpy as np
    s = np.array(sorted(members), dtype=np.int16)
    coset_id = np.full(g.n, -1, dtype=np.int32)
    reps = []
    for x in range(g.n):
        if coset_id[x] < 0:
            coset_id[g.mul[x, s]] = len(reps)
            reps.append(x)
    act = np.empty((g.n, len(reps)), dtype=np.int32)
    for a in range(g.n):
        act[a] = coset_id[g.mul[a, np.array(reps, dtype=np.int16)]]
    return act


def brute_marks(g, q_members, r_members):
    """Fixed points of R on G/Q by direct coset scan."""
    act = coset_action(g, q_members)
    fixed = 0
    for pt in range(act.shape[1]):
        if all(int(act[r, pt]) == pt for r in r_members):
            fixed += 1
    return fixed


def test_marks_c2_and_trivial():
    c2 = build_group("C2")
    m = marks_matrix(c2)
    assert m.tolist() == [[2, 0], [1, 1]]
    t = build_group("C1")
    assert marks_matrix(t).tolist() == [[1]]


def test_marks_d8_center_row():
    g = build_group("D8")
    classes = g.subgroup_classes()
    z = next(c for c in classes if c.order == 2 and c.size == 1)
    m = marks_matrix(g)
    assert m[z.index, z.index] == 4


@pytest.mark.parametrize("name", ["C4", "D8", "Q8", "C3xC3", "X3", "D16"])
def test_marks_against_brute_force(name):
    g = build_group(name)
    classes = g.subgroup_classes()
    m = marks_matrix(g)
    for j, qc in enumerate(classes):
        for i, rc in enumerate(classes):
            want = brute_marks(g, [int(x) for x in qc.rep], [int(x) for x in rc.rep])
            assert m[j, i] == want
    # triangular and invertible over Q
    for j in range(len(classes)):
        assert m[j, j] != 0
        for i in range(j + 1, len(classes)):
            assert m[j, i] == 0 or classes[i].order <= classes[j].order


def test_element_arithmetic_and_cardinality():
    g = build_group("D8")
    a = transitive_element(g, 0)
    b = transitive_element(g, len(g.subgroup_classes()) - 1)
    x = a + a - b.scaled(3)
    assert x.coeffs == {0: 2, len(g.subgroup_classes()) - 1: -3}
    assert x.cardinality() == 2 * 8 - 3
    assert marks_of(x)[0] == x.cardinality()


def test_decompose_regular_action_c2():
    g = build_group("C2")
    act = coset_action(g, [0])
    dec = decompose_action(g, act)
    assert dec == transitive_element(g, 0)


def test_decompose_invalid_action():
    g = build_group("C2")
    with pytest.raises(InvalidParametersError):
        decompose_action(g, np.array([[1, 0], [0, 1]]))  # identity acts nontrivially
    g4 = build_group("C4")
    shift = [1, 2, 3, 0]
    bad = np.array([[0, 1, 2, 3], shift, [0, 1, 2, 3], shift])  # square acts wrongly
    with pytest.raises(InvalidParametersError):
        decompose_action(g4, bad)


def test_decompose_conjugation_on_involutions():
    g = build_group("D8")
    orders = g.element_orders()
    invs = [x for x in range(8) if orders[x] == 2]
    assert len(invs) == 5
    pos = {x: i for i, x in enumerate(invs)}
    act = np.empty((8, 5), dtype=np.int32)
    for a in range(8):
        for i, x in enumerate(invs):
            act[a, i] = pos[int(g.conj[g.inv[a], x])]  # a x a^-1
    dec = decompose_action(g, act)
    classes = g.subgroup_classes()
    # one fixed point (the central involution), two orbits of size 2 with
    # Klein stabilizers
    whole = len(classes) - 1
    assert dec.coeffs[whole] == 1
    kleins = [c.index for c in classes if c.order == 4 and not c.is_cyclic()]
    assert sum(dec.coeffs.get(k, 0) for k in kleins) == 2
    assert sum(v * (8 // classes[k].order) for k, v in dec.coeffs.items()) == 5


def test_decompose_projective_points_p2():
    s, act_p, _ = projective_plane_data(2)
    dec = decompose_action(s, act_p)
    classes = s.subgroup_classes()
    sizes = sorted((s.n // classes[k].order) * v for k, v in dec.coeffs.items())
    assert sizes == [1, 2, 4]
    stab_orders = sorted(classes[k].order for k in dec.coeffs)
    assert stab_orders == [2, 4, 8]
    # the order-4 stabilizer is a Klein subgroup, the order-2 one noncentral
    k4 = next(k for k in dec.coeffs if classes[k].order == 4)
    assert not classes[k4].is_cyclic()
    k2 = next(k for k in dec.coeffs if classes[k].order == 2)
    assert classes[k2].size > 1


def test_reexpansion_reproduces_fixed_points():
    # marks of the decomposition equal direct fixed-point counts of the action
    for p in (2, 3):
        s, act_p, act_l = projective_plane_data(p)
        for act in (act_p, act_l):
            dec = decompose_action(s, act)
            ms = marks_of(dec)
            for i, cl in enumerate(s.subgroup_classes()):
                fixed = sum(1 for pt in range(act.shape[1])
                            if all(int(act[r, pt]) == pt for r in cl.rep))
                assert ms[i] == fixed


@pytest.mark.parametrize("p", [2, 3])
def test_epsilon(p):
    e = build_group(f"E{p}_2")
    eps = epsilon_element(e)
    assert eps.coeffs[0] == 1
    assert eps.cardinality() == 0
    assert (cyclic_marks(eps) == 0).all()
    vals = sorted(eps.coeffs.values())
    assert vals == [-1] * (p + 1) + [1, p]


def test_epsilon_rejects_cyclic():
    with pytest.raises(InvalidParametersError):
        epsilon_element(build_group("C4"))


def test_cyclic_marks_c2():
    g = build_group("C2")
    x = transitive_element(g, 0)
    assert cyclic_marks(x).tolist() == [2, 0]


def test_kernel_ranks():
    # cyclic groups have trivial kernel
    for name in ["C2", "C8", "C27"]:
        g = build_group(name)
        assert kernel_lattice(g).rank == 0
    d8 = build_group("D8")
    assert len(cyclic_class_indices(d8)) == 5  # p + 3 for p = 2
    assert kernel_lattice(d8).rank == 8 - 5
    # Q8 has 6 subgroup classes, of which 5 are cyclic (1, Z, three C4)
    q8 = build_group("Q8")
    assert len(cyclic_class_indices(q8)) == 5
    assert kernel_lattice(q8).rank == 6 - 5


def test_kernel_vectors_have_zero_cardinality():
    for name in ["D8", "Q8", "D16", "X3", "C2xC2"]:
        g = build_group(name)
        lat = kernel_lattice(g)
        for row in lat.basis:
            x = from_vector(g, row)
            assert x.cardinality() == 0
            assert (cyclic_marks(x) == 0).all()


def test_epsilon_in_kernel():
    for p in (2, 3):
        e = build_group(f"E{p}_2")
        assert kernel_lattice(e).contains(epsilon_element(e).to_vector())
