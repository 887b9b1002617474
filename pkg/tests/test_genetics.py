import pytest

from bfk.bisets import BisetMorphism, compose, deflation, inflation
from bfk.errors import InvalidParametersError
from bfk.genetics import (
    b_map,
    genetic_basis,
    indinf_map,
    is_genetic,
    linkage_is_equivalence,
    linked,
)
from bfk.groups import build_group


def rep_of(g, pred):
    return next([int(v) for v in c.rep] for c in g.subgroup_classes() if pred(c))


def test_is_genetic_basics():
    for p in (2, 3):
        assert is_genetic(build_group(f"C{p}"), [0])
    assert not is_genetic(build_group("C2xC2"), [0])
    x3 = build_group("X3")
    i_mem = rep_of(x3, lambda c: c.order == 3 and c.size > 1)
    assert is_genetic(x3, i_mem)
    # the center of X3 is not genetic: X3/Z is elementary abelian of rank 2
    z_mem = rep_of(x3, lambda c: c.order == 3 and c.size == 1)
    assert not is_genetic(x3, z_mem)


def test_linked_reflexive_and_conjugates():
    d8 = build_group("D8")
    i_mem = rep_of(d8, lambda c: c.order == 2 and c.size == 2)
    assert linked(d8, i_mem, i_mem)
    cls = next(c for c in d8.subgroup_classes() if c.order == 2 and c.size == 2)
    other = [int(v) for v in cls.conjugates[1]]
    assert linked(d8, i_mem, other)


def test_d8_reflection_classes_are_linked():
    # both noncentral reflection classes carry the faithful rational
    # representation; their intersections with the opposite axis are trivial
    # on both sides, so they are linked and the basis keeps only one of them
    d8 = build_group("D8")
    refl = [c for c in d8.subgroup_classes() if c.order == 2 and c.size == 2]
    i_mem = [int(v) for v in refl[0].rep]
    j_mem = [int(v) for v in refl[1].rep]
    assert linked(d8, i_mem, j_mem)
    # whereas a reflection class is never linked to the Klein subgroup over it
    kl = next(c for c in d8.subgroup_classes()
              if c.order == 4 and not c.is_cyclic()
              and set(int(v) for v in refl[0].rep) <= set(int(v) for v in c.rep))
    assert not linked(d8, i_mem, [int(v) for v in kl.rep])


def test_linked_rejects_non_genetic():
    e = build_group("C2xC2")
    with pytest.raises(InvalidParametersError):
        linked(e, [0], [0])


@pytest.mark.parametrize("p", [2, 3])
def test_genetic_basis_elementary_abelian(p):
    e = build_group(f"E{p}_2")
    basis = genetic_basis(e)
    assert len(basis.entries) == p + 2
    orders = sorted(len(ent.members) for ent in basis.entries)
    assert orders == [p] * (p + 1) + [p * p]
    assert basis.dihedral_count == 0


@pytest.mark.parametrize("p", [2, 3])
def test_genetic_basis_of_x(p):
    x = build_group("D8") if p == 2 else build_group("X3")
    basis = genetic_basis(x)
    assert len(basis.entries) == p + 3
    # the subgroups of index <= p, plus one noncentral order-p subgroup
    big = [e for e in basis.entries if x.n // len(e.members) <= p]
    small = [e for e in basis.entries if len(e.members) == p]
    assert len(big) == p + 2 and len(small) == 1
    cls = x.subgroup_classes()[basis.entries[0].class_index]
    noncentral = next(e for e in basis.entries if len(e.members) == p)
    assert x.subgroup_classes()[noncentral.class_index].size > 1


def test_genetic_basis_d16():
    d16 = build_group("D16")
    basis = genetic_basis(d16)
    trivial_entry = next(e for e in basis.entries if len(e.members) == 1)
    assert trivial_entry.quotient_type == "Dihedral"
    assert basis.dihedral_count == 1


def test_genetic_basis_d32():
    basis = genetic_basis(build_group("D32"))
    assert basis.dihedral_count == 2


def test_dihedral_count_zero_small():
    for name in ["C2", "C4", "C8", "C2xC2", "D8", "Q8", "C4xC2", "Q16", "SD16",
                 "D8xC2", "X3", "C3xC3"]:
        assert genetic_basis(build_group(name)).dihedral_count == 0, name


@pytest.mark.parametrize("name", ["C4", "C2xC2", "D8", "Q8", "D16", "SD16", "X3",
                                  "C4xC2", "Q8xC2"])
def test_linkage_is_equivalence(name):
    assert linkage_is_equivalence(build_group(name))


@pytest.mark.parametrize("name", ["D8", "Q8", "D16", "SD16", "C4xC2", "X3", "C2xC2xC2"])
def test_alternative_bases_agree_in_shape(name):
    g = build_group(name)
    b1 = genetic_basis(g)
    b2 = genetic_basis(g, alternative=True)
    assert len(b1.entries) == len(b2.entries)
    types1 = sorted((e.quotient.n, e.quotient_type) for e in b1.entries)
    types2 = sorted((e.quotient.n, e.quotient_type) for e in b2.entries)
    assert types1 == types2


@pytest.mark.parametrize("name", ["C2xC2", "C4xC2", "D8xC2", "C2xC2xC2", "Q8xC2"])
def test_noncyclic_center_genetic_meets_center(name):
    g = build_group(name)
    z_mask = 0
    for z in g.center():
        z_mask |= 1 << int(z)
    assert bin(z_mask).count("1") > 2 or len(g.center()) == 4  # noncyclic center
    for e in genetic_basis(g).entries:
        mem_mask = 0
        for v in e.members:
            mem_mask |= 1 << v
        assert mem_mask & z_mask != 1  # intersection beyond the identity
        orders = g.element_orders()
        inter = [v for v in e.members if (z_mask >> v) & 1 and v != 0]
        assert inter, f"genetic subgroup misses the center in {name}"


def test_b_map_c4_trivial():
    # after identifying the quotient by the trivial subgroup with C4 itself,
    # the projection map is Id minus inflation-deflation through C2
    import numpy as np
    from bfk.bisets import transport
    from bfk.groups import make_section
    c4 = build_group("C4")
    b = b_map(c4, [0])
    sec = make_section(c4, range(4), [0])
    phi_inv = np.zeros(4, dtype=np.int64)
    for x in range(4):
        phi_inv[int(sec.proj[x])] = x
    ident = transport(sec.quotient, c4, phi_inv)
    z = rep_of(c4, lambda c: c.order == 2)
    want = BisetMorphism.identity(c4) - compose(inflation(c4, z), deflation(c4, z))
    assert compose(ident, b) == want


def test_b_map_whole_group_is_point():
    c4 = build_group("C4")
    b = b_map(c4, [0, 1, 2, 3])
    assert len(b.terms) == 1 and b.cardinality() == 1


def test_b_after_a_fixes_faithful_idempotent():
    # b_Q o a_Q composed with the faithful idempotent of the quotient gives
    # that idempotent back: the split-injectivity witness at morphism level
    from bfk.bisets import faithful_idempotent
    for name in ["C4", "D8", "Q8", "X3", "D16", "SD16"]:
        g = build_group(name)
        for ent in genetic_basis(g).entries:
            a = indinf_map(g, list(ent.members))
            b = b_map(g, list(ent.members))
            f1 = faithful_idempotent(ent.quotient, [0])
            assert compose(compose(b, a), f1) == f1, (name, ent.class_index)
