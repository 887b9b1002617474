"""Genetic subgroups, linkage, genetic bases, and their attached morphisms.

A subgroup Q of a p-group P is genetic when N_P(Q)/Q has normal p-rank 1
(cyclic, generalized quaternion, or dihedral/semidihedral of order >= 16)
and, for every x in P, the conjugate Q^x meets Z_P(Q) inside Q only when
Q^x = Q.  Both bullets are checked literally, by quantifying over
conjugates, so this module is oracle-grade rather than fast.

A genetic basis picks one representative per linkage class, always the one
with the least canonical subgroup-class key, so bases are reproducible.
d(P) counts the basis entries whose normalizer quotient is dihedral.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bisets import (
    BisetMorphism,
    compose,
    deflation_restriction,
    faithful_idempotent,
    induction_inflation,
)
from .errors import InvalidParametersError
from .groups import Group, LocalData, local_data


def _mask(members) -> int:
    m = 0
    for x in members:
        m |= 1 << int(x)
    return m


def is_genetic(p_grp: Group, q_members: Sequence[int]) -> bool:
    ld = local_data(p_grp, q_members)
    if ld.quotient_type == "NotRank1":
        return False
    q_arr = np.asarray(sorted(int(x) for x in q_members), dtype=np.int16)
    q_mask = _mask(q_arr)
    zp_mask = _mask(ld.zp_members)
    for row in p_grp.conjugates_sorted(q_arr):
        s_mask = _mask(row)
        if s_mask == q_mask:
            continue
        if s_mask & zp_mask & ~q_mask == 0:
            return False  # a different conjugate meets the axis inside Q
    return True


def linked(p_grp: Group, q_members: Sequence[int], r_members: Sequence[int]) -> bool:
    """Linkage of two genetic subgroups: some conjugate of each meets the
    other's axis inside the other."""
    if not is_genetic(p_grp, q_members) or not is_genetic(p_grp, r_members):
        raise InvalidParametersError("linkage is defined on genetic subgroups")

    def half(a_members, b_members) -> bool:
        b_mask = _mask(b_members)
        zb_mask = _mask(local_data(p_grp, b_members).zp_members)
        a_arr = np.asarray(sorted(int(x) for x in a_members), dtype=np.int16)
        for row in p_grp.conjugates_sorted(a_arr):
            if _mask(row) & zb_mask & ~b_mask == 0:
                return True
        return False

    return half(q_members, r_members) and half(r_members, q_members)


@dataclass
class GeneticEntry:
    class_index: int
    local: LocalData

    @property
    def members(self) -> tuple[int, ...]:
        return self.local.members

    @property
    def quotient(self) -> Group:
        return self.local.section.quotient

    @property
    def quotient_type(self) -> str:
        return self.local.quotient_type


@dataclass
class GeneticBasis:
    group: Group
    entries: list[GeneticEntry]

    @property
    def dihedral_count(self) -> int:
        return sum(1 for e in self.entries if e.quotient_type == "Dihedral")


_BASIS_CACHE: dict[tuple[int, bool], GeneticBasis] = {}


def genetic_basis(p_grp: Group, alternative: bool = False) -> GeneticBasis:
    """Representatives of the linkage classes of genetic subgroups.

    With alternative=True the representative with the largest class key is
    chosen instead of the smallest (used to check basis independence).
    """
    key = (p_grp.uid, alternative)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    classes = p_grp.subgroup_classes()
    genetic = [c.index for c in classes
               if is_genetic(p_grp, [int(v) for v in c.rep])]
    blocks: list[list[int]] = []
    for idx in genetic:
        mem = [int(v) for v in classes[idx].rep]
        placed = False
        for block in blocks:
            rep_mem = [int(v) for v in classes[block[0]].rep]
            if linked(p_grp, mem, rep_mem):
                block.append(idx)
                placed = True
                break
        if not placed:
            blocks.append([idx])
    chosen = [max(b) if alternative else min(b) for b in blocks]
    entries = [GeneticEntry(i, local_data(p_grp, [int(v) for v in classes[i].rep]))
               for i in sorted(chosen)]
    basis = GeneticBasis(p_grp, entries)
    _BASIS_CACHE[key] = basis
    return basis


def linkage_is_equivalence(p_grp: Group) -> bool:
    """Empirical transitivity check of linkage on all genetic classes."""
    classes = p_grp.subgroup_classes()
    genetic = [c for c in classes if is_genetic(p_grp, [int(v) for v in c.rep])]
    mems = [[int(v) for v in c.rep] for c in genetic]
    n = len(mems)
    rel = [[linked(p_grp, mems[i], mems[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if not rel[i][i]:
            return False
        for j in range(n):
            if rel[i][j] != rel[j][i]:
                return False
            for k in range(n):
                if rel[i][j] and rel[j][k] and not rel[i][k]:
                    return False
    return True


def indinf_map(p_grp: Group, q_members: Sequence[int]) -> BisetMorphism:
    """The induction-inflation morphism N_P(Q)/Q -> P attached to a genetic
    subgroup; equals the class of the biset P/Q."""
    if not is_genetic(p_grp, q_members):
        raise InvalidParametersError("subgroup is not genetic")
    ld = local_data(p_grp, q_members)
    return induction_inflation(p_grp, ld.section)


def b_map(p_grp: Group, q_members: Sequence[int]) -> BisetMorphism:
    """The projection morphism P -> N_P(Q)/Q: the faithful idempotent of
    the quotient composed with deflation-restriction.  Expands to the
    difference of the two section Defres maps (a single deflation when
    Q = P)."""
    if not is_genetic(p_grp, q_members):
        raise InvalidParametersError("subgroup is not genetic")
    ld = local_data(p_grp, q_members)
    defres = deflation_restriction(p_grp, ld.section)
    f1 = faithful_idempotent(ld.section.quotient, [0])
    return compose(f1, defres)
