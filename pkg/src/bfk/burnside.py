"""The Burnside group B(G) of a finite group given by its table.

Elements are sparse integer vectors over the canonical list of subgroup
conjugacy classes; the basis element at class index i is the transitive
G-set G/Q_i.  Marks (fixed-point counts) give the exact linear embedding
used everywhere: two virtual G-sets are equal iff their marks agree, and
equality of the associated rational permutation representations is
equality of marks on cyclic subgroup classes only.  The kernel of the
cyclic-marks map is the lattice K(G).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import InvalidParametersError
from .groups import Group, SubgroupClass
from .zlin import Lattice, hnf_basis, left_kernel


class BurnsideElement:
    """Sparse integer vector over the subgroup classes of a fixed group."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs: Optional[Mapping[int, int]] = None):
        self.group = group
        self.coeffs: dict[int, int] = {}
        if coeffs:
            nclasses = len(group.subgroup_classes())
            for k, v in coeffs.items():
                if not 0 <= k < nclasses:
                    raise InvalidParametersError(f"class index {k} out of range")
                if v:
                    self.coeffs[int(k)] = int(v)

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BurnsideElement(self.group, out)

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self + (-other)

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(self.group, {k: -v for k, v in self.coeffs.items()})

    def scaled(self, c: int) -> "BurnsideElement":
        return BurnsideElement(self.group, {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        return self.group.uid == other.group.uid and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.group.uid, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def cardinality(self) -> int:
        """Virtual cardinality: sum of coeff * [G : Q]."""
        g = self.group
        classes = g.subgroup_classes()
        return sum(v * (g.n // classes[k].order) for k, v in self.coeffs.items())

    def to_vector(self) -> list[int]:
        n = len(self.group.subgroup_classes())
        vec = [0] * n
        for k, v in self.coeffs.items():
            vec[k] = v
        return vec

    def _check(self, other: "BurnsideElement") -> None:
        if self.group.uid != other.group.uid:
            raise InvalidParametersError("elements live over different groups")

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"0 in B({self.group.name})"
        terms = " + ".join(f"{v}*[{self.group.name}/#{k}]"
                           for k, v in sorted(self.coeffs.items()))
        return terms


def from_vector(group: Group, vec: Sequence[int]) -> BurnsideElement:
    return BurnsideElement(group, {i: int(v) for i, v in enumerate(vec) if v})


def transitive_element(group: Group, class_index: int) -> BurnsideElement:
    return BurnsideElement(group, {class_index: 1})


def element_of_subgroup(group: Group, members: Iterable[int]) -> BurnsideElement:
    """The class of the transitive set G/Q for the given subgroup Q."""
    return transitive_element(group, group.class_of(list(members)))


def validate_action(group: Group, act: np.ndarray) -> None:
    """Check that act is a left action table: act[g, x] = g.x."""
    n, m = act.shape
    if n != group.n:
        raise InvalidParametersError("action table has wrong number of rows")
    if not (act[0] == np.arange(m)).all():
        raise InvalidParametersError("identity does not act trivially")
    for g in group.generators():
        if len(np.unique(act[g])) != m:
            raise InvalidParametersError("a generator does not act by a permutation")
        for h in range(n):
            if not (act[group.mul[g, h]] == act[g][act[h]]).all():
                raise InvalidParametersError("action is not compatible with multiplication")


def decompose_action(group: Group, act: np.ndarray) -> BurnsideElement:
    """Orbit decomposition of a finite left G-set into transitive classes."""
    act = np.asarray(act)
    validate_action(group, act)
    m = act.shape[1]
    seen = np.zeros(m, dtype=bool)
    coeffs: dict[int, int] = {}
    for x0 in range(m):
        if seen[x0]:
            continue
        orbit = {x0}
        frontier = [x0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in group.generators():
                    y = int(act[g, x])
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        for x in orbit:
            seen[x] = True
        stab = [int(g) for g in np.nonzero(act[:, x0] == x0)[0]]
        idx = group.class_of(stab)
        coeffs[idx] = coeffs.get(idx, 0) + 1
    return BurnsideElement(group, coeffs)


_MARKS_CACHE: dict[int, np.ndarray] = {}


def marks_matrix(group: Group) -> np.ndarray:
    """Table of marks: entry [j, i] is the number of fixed points of the
    class-i representative on the transitive set G/Q_j.  Lower triangular
    with nonzero diagonal under the canonical class order."""
    cached = _MARKS_CACHE.get(group.uid)
    if cached is not None:
        return cached
    classes = group.subgroup_classes()
    c = len(classes)
    marks = np.zeros((c, c), dtype=np.int64)
    norm_orders = [len(cl.normalizer_members) for cl in classes]
    for j, qcl in enumerate(classes):
        qmask = qcl.rep_mask
        qorder = qcl.order
        for i, rcl in enumerate(classes):
            if rcl.order > qorder:
                break
            inside = sum(1 for mk in rcl.masks if mk & qmask == mk)
            if inside:
                marks[j, i] = inside * norm_orders[i] // qorder
    _MARKS_CACHE[group.uid] = marks
    return marks


def marks_of(x: BurnsideElement) -> np.ndarray:
    m = marks_matrix(x.group)
    out = np.zeros(m.shape[1], dtype=np.int64)
    for k, v in x.coeffs.items():
        out += v * m[k]
    return out


def cyclic_class_indices(group: Group) -> list[int]:
    return [c.index for c in group.subgroup_classes() if c.is_cyclic()]


def cyclic_marks(x: BurnsideElement) -> np.ndarray:
    """Marks restricted to cyclic subgroup classes; this is the rational
    character of the virtual permutation representation."""
    return marks_of(x)[cyclic_class_indices(x.group)]


_KERNEL_CACHE: dict[int, Lattice] = {}


def kernel_lattice(group: Group) -> Lattice:
    """K(G): integer kernel of the cyclic-marks map on B(G)."""
    cached = _KERNEL_CACHE.get(group.uid)
    if cached is not None:
        return cached
    m = marks_matrix(group)
    cyc = cyclic_class_indices(group)
    rows = [[int(v) for v in m[j, cyc]] for j in range(m.shape[0])]
    lat = hnf_basis(left_kernel(rows, len(cyc)), ambient=m.shape[0])
    _KERNEL_CACHE[group.uid] = lat
    return lat


def epsilon_element(e_grp: Group) -> BurnsideElement:
    """E/1 - sum of E/F over the p+1 order-p subgroups + p*E/E, for E
    elementary abelian of rank 2."""
    p = e_grp.prime
    if e_grp.n != p * p or e_grp.exponent() != p or p == 1:
        raise InvalidParametersError("epsilon needs an elementary abelian group of rank 2")
    coeffs = {0: 1}
    classes = e_grp.subgroup_classes()
    for cl in classes:
        if cl.order == p:
            coeffs[cl.index] = -1
        elif cl.order == p * p:
            coeffs[cl.index] = p
    if len(coeffs) != p + 3:
        raise AssertionError("unexpected subgroup class structure for rank-2 group")
    return BurnsideElement(e_grp, coeffs)
