"""Morphisms of the double Burnside category of p-groups.

Conventions, used consistently everywhere:

* A morphism u: G -> H is an integer combination of transitive classes of
  subgroups L of the product group H x G (target first).  The transitive
  biset attached to L is the left-coset space (H x G)/L, with biset action
  h . wL . g = ((h, g^-1) w) L.
* B(G) is identified with Hom(1, G): an element of B(G) is a morphism from
  the trivial group, and subgroups of G x 1 are subgroups of G.
* Composition (v: H -> K) o (u: G -> H) is computed by two independent
  algorithms: an orbit method that materializes V x U and fuses the middle
  action (the trusted oracle), and the double-coset star product (the fast
  path).  `compose(..., method="both")` runs both and fails loudly on any
  disagreement.

Morphism terms are stored keyed by the canonical form of the stabilizer
subgroup (the lexicographically least conjugate of the sorted member list),
so equality of morphisms never needs the ambient product group's subgroup
classes to be enumerated.  That keeps large products (order up to 512)
usable as morphism carriers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .burnside import BurnsideElement
from .errors import InvalidParametersError
from .groups import (
    Group,
    Section,
    build_group,
    direct_product,
    local_data,
    make_section,
    subgroup_as_group,
    trivial_group,
)
from .zlin import FinitePoset

_MORPHISM_PROD_CAP = 1024


def _product(target: Group, source: Group) -> Group:
    return direct_product(target, source, _MORPHISM_PROD_CAP).group


class BisetMorphism:
    """Formal sum of transitive (target, source)-bisets."""

    __slots__ = ("source", "target", "prod", "terms")

    def __init__(self, source: Group, target: Group,
                 terms: Optional[Mapping[bytes, int]] = None):
        self.source = source
        self.target = target
        self.prod = _product(target, source)
        self.terms: dict[bytes, int] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = int(v)

    # -- construction ------------------------------------------------------

    @staticmethod
    def transitive(source: Group, target: Group, members: Iterable[int]) -> "BisetMorphism":
        m = BisetMorphism(source, target)
        key = m.prod.canonical_subgroup_key(list(members))
        m.terms[key] = 1
        return m

    @staticmethod
    def identity(g: Group) -> "BisetMorphism":
        return BisetMorphism.transitive(g, g, [g.n * int(x) + int(x) for x in range(g.n)])

    @staticmethod
    def zero(source: Group, target: Group) -> "BisetMorphism":
        return BisetMorphism(source, target)

    @staticmethod
    def from_element(x: BurnsideElement) -> "BisetMorphism":
        """B(G) as Hom(1, G)."""
        triv = trivial_group()
        m = BisetMorphism(triv, x.group)
        classes = x.group.subgroup_classes()
        for idx, c in x.coeffs.items():
            key = classes[idx].rep.astype(np.int16).tobytes()
            m.terms[key] = c
        return m

    def to_element(self) -> BurnsideElement:
        """Read a morphism with trivial source as an element of B(target)."""
        if self.source.n != 1:
            raise InvalidParametersError("only morphisms from the trivial group are elements")
        coeffs: dict[int, int] = {}
        for key, c in self.terms.items():
            members = np.frombuffer(key, dtype=np.int16)
            idx = self.target.class_of([int(v) for v in members])
            coeffs[idx] = coeffs.get(idx, 0) + c
        return BurnsideElement(self.target, coeffs)

    def term_members(self) -> list[tuple[np.ndarray, int]]:
        return [(np.frombuffer(k, dtype=np.int16), v) for k, v in sorted(self.terms.items())]

    # -- abelian group structure -------------------------------------------

    def _check(self, other: "BisetMorphism") -> None:
        if self.source.uid != other.source.uid or self.target.uid != other.target.uid:
            raise InvalidParametersError("morphisms have different source or target")

    def __add__(self, other: "BisetMorphism") -> "BisetMorphism":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BisetMorphism(self.source, self.target, out)

    def __sub__(self, other: "BisetMorphism") -> "BisetMorphism":
        return self + (-other)

    def __neg__(self) -> "BisetMorphism":
        return BisetMorphism(self.source, self.target,
                             {k: -v for k, v in self.terms.items()})

    def scaled(self, c: int) -> "BisetMorphism":
        return BisetMorphism(self.source, self.target,
                             {k: c * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BisetMorphism):
            return NotImplemented
        return (self.source.uid == other.source.uid
                and self.target.uid == other.target.uid
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.source.uid, self.target.uid,
                     tuple(sorted(self.terms.items()))))

    def opposite(self) -> "BisetMorphism":
        """Swap the two factors of every term subgroup: Hom(G,H) -> Hom(H,G)."""
        out = BisetMorphism(self.target, self.source)
        ns, nt = self.source.n, self.target.n
        for key, c in self.terms.items():
            members = np.frombuffer(key, dtype=np.int16).astype(np.int64)
            h, g = members // ns, members % ns
            flipped = g * nt + h
            k2 = out.prod.canonical_subgroup_key([int(v) for v in flipped])
            out.terms[k2] = out.terms.get(k2, 0) + c
        return out

    def element(self) -> BurnsideElement:
        """The underlying element of B(target x source); enumerates the
        product group's subgroup classes, so only call it on small products."""
        coeffs: dict[int, int] = {}
        for key, c in self.terms.items():
            members = np.frombuffer(key, dtype=np.int16)
            idx = self.prod.class_of([int(v) for v in members])
            coeffs[idx] = coeffs.get(idx, 0) + c
        return BurnsideElement(self.prod, coeffs)

    def cardinality(self) -> int:
        """Virtual number of points: sum of coeff * [target x source : L]."""
        total = 0
        for key, c in self.terms.items():
            k = len(np.frombuffer(key, dtype=np.int16))
            total += c * (self.prod.n // k)
        return total

    def __repr__(self) -> str:
        return (f"BisetMorphism({self.source.name} -> {self.target.name}, "
                f"{len(self.terms)} terms)")


def reinterpret(u: BisetMorphism, source: Group, target: Group) -> BisetMorphism:
    """Reread a morphism along an identification of product groups with the
    same element indexing, e.g. Hom(P x X, Q) = Hom(X, Q x P).  Valid
    because iterated products index strictly associatively."""
    new = BisetMorphism(source, target)
    if new.prod.n != u.prod.n or not (new.prod.mul == u.prod.mul).all():
        raise InvalidParametersError("product groups are not identical under reindexing")
    new.terms = dict(u.terms)
    return new


# --------------------------------------------------------------------------
# coset spaces (cached per product group and subgroup)


class _CosetSpace:
    __slots__ = ("group", "reps", "coset_id", "nn", "_maps")

    def __init__(self, group: Group, members: np.ndarray):
        self.group = group
        arr = np.asarray(members, dtype=np.int16)
        coset_id = np.full(group.n, -1, dtype=np.int32)
        reps = []
        for w in range(group.n):
            if coset_id[w] < 0:
                coset_id[group.mul[w, arr]] = len(reps)
                reps.append(w)
        self.reps = np.array(reps, dtype=np.int16)
        self.coset_id = coset_id
        self.nn = len(reps)
        self._maps: dict[int, np.ndarray] = {}

    def left_map(self, elem: int) -> np.ndarray:
        """Permutation of cosets induced by left multiplication by elem."""
        got = self._maps.get(elem)
        if got is None:
            got = self.coset_id[self.group.mul[elem, self.reps]]
            self._maps[elem] = got
        return got


_COSET_CACHE: dict[tuple[int, bytes], _CosetSpace] = {}


def _coset_space(group: Group, members: np.ndarray) -> _CosetSpace:
    key = (group.uid, np.asarray(members, dtype=np.int16).tobytes())
    got = _COSET_CACHE.get(key)
    if got is None:
        got = _CosetSpace(group, members)
        _COSET_CACHE[key] = got
    return got


def _components(nnodes: int, perms: list[np.ndarray]) -> np.ndarray:
    """Orbit labels for the group generated by the given node permutations:
    iterate min-label propagation along each permutation with pointer
    jumping until stable.  Each node ends labeled by its orbit minimum."""
    labels = np.arange(nnodes)
    if not perms or nnodes == 0:
        return labels
    while True:
        prev = labels
        for p in perms:
            labels = np.minimum(labels, labels[p])
        labels = np.minimum(labels, labels[labels])
        labels = labels[labels]
        if (labels == prev).all():
            return labels


# --------------------------------------------------------------------------
# transitive composition, two ways


def _compose_transitive_orbit(kg: Group, hg: Group, gg: Group,
                              l_members: np.ndarray, m_members: np.ndarray) -> dict[bytes, int]:
    """Materialize (K x H)/L x (H x G)/M, fuse the middle H, decompose."""
    prod_kh = _product(kg, hg)
    prod_hg = _product(hg, gg)
    prod_out = _product(kg, gg)
    v = _coset_space(prod_kh, l_members)
    u = _coset_space(prod_hg, m_members)
    nv, nu = v.nn, u.nn
    nodes = nv * nu
    node_v, node_u = np.divmod(np.arange(nodes), nu)
    perms = []
    for h in (hg.generators() or ()):
        vmap = v.left_map(int(h))                 # (1_K, h): index h
        umap = u.left_map(int(h) * gg.n)          # (h, 1_G): index h*|G|
        perms.append(vmap[node_v] * nu + umap[node_u])
    labels = _components(nodes, perms)
    pts, rep_node, point_of_node = np.unique(labels, return_index=True, return_inverse=True)
    npts = len(pts)
    # orbits of the point set under K x G
    pt_perms = []
    rep_v, rep_u = rep_node // nu, rep_node % nu
    for k in (kg.generators() or ()):
        vmap = v.left_map(int(k) * hg.n)          # (k, 1_H)
        pt_perms.append(point_of_node[vmap[rep_v] * nu + rep_u])
    for g in (gg.generators() or ()):
        umap = u.left_map(int(g))                 # (1_H, g)
        pt_perms.append(point_of_node[rep_v * nu + umap[rep_u]])
    orbit_labels = _components(npts, pt_perms)
    out: dict[bytes, int] = {}
    covered = 0
    for orbit in np.unique(orbit_labels):
        c0 = int(np.nonzero(orbit_labels == orbit)[0][0])
        v0, u0 = int(rep_node[c0] // nu), int(rep_node[c0] % nu)
        a = v.coset_id[prod_kh.mul[np.arange(kg.n) * hg.n, v.reps[v0]]]
        b = u.coset_id[prod_hg.mul[np.arange(gg.n), u.reps[u0]]]
        hit = point_of_node[a[:, None] * nu + b[None, :]] == c0
        ks, gs = np.nonzero(hit)
        members = ks * gg.n + gs
        covered += (kg.n * gg.n // len(members))
        key = prod_out.canonical_subgroup_key([int(x) for x in members])
        out[key] = out.get(key, 0) + 1
    if covered != npts:
        raise AssertionError("orbit decomposition lost points; broken action")
    return out


def _compose_transitive_mackey(kg: Group, hg: Group, gg: Group,
                               l_members: np.ndarray, m_members: np.ndarray) -> dict[bytes, int]:
    """Double-coset star product over the middle group."""
    prod_out = _product(kg, gg)
    l_arr = np.asarray(l_members, dtype=np.int64)
    m_arr = np.asarray(m_members, dtype=np.int64)
    l_k, l_h = np.divmod(l_arr, hg.n)
    m_h, m_g = np.divmod(m_arr, gg.n)
    p2l = np.unique(l_h).astype(np.int16)
    p1m = np.unique(m_h).astype(np.int16)
    ks_by_h: dict[int, list[int]] = {}
    for k, h in zip(l_k, l_h):
        ks_by_h.setdefault(int(h), []).append(int(k))
    visited = np.zeros(hg.n, dtype=bool)
    out: dict[bytes, int] = {}
    for x0 in range(hg.n):
        if visited[x0]:
            continue
        left = hg.mul[p2l, x0]
        coset = np.unique(hg.mul[np.ix_(left, p1m)])
        visited[coset] = True
        conj_by_x = hg.conj[hg.inv[x0]]        # h -> x0 h x0^-1
        gs_by_h: dict[int, list[int]] = {}
        for h, g in zip(m_h, m_g):
            gs_by_h.setdefault(int(conj_by_x[h]), []).append(int(g))
        members = set()
        for h, ks in ks_by_h.items():
            gs = gs_by_h.get(h)
            if gs:
                for k in ks:
                    base = k * gg.n
                    for g in gs:
                        members.add(base + g)
        key = prod_out.canonical_subgroup_key(sorted(members))
        out[key] = out.get(key, 0) + 1
    return out


_COMPOSE_MEMO: dict[tuple, dict[bytes, int]] = {}


def compose(v: BisetMorphism, u: BisetMorphism, method: str = "mackey") -> BisetMorphism:
    """v o u for u: G -> H and v: H -> K.

    method: "mackey" (fast path), "orbit" (oracle), or "both" (referee:
    run both on every transitive pair and fail loudly on disagreement).
    """
    if v.source.uid != u.target.uid:
        raise InvalidParametersError("middle groups do not match")
    if method not in ("mackey", "orbit", "both"):
        raise InvalidParametersError(f"unknown composition method {method!r}")
    kg, hg, gg = v.target, v.source, u.source
    out = BisetMorphism(gg, kg)
    acc: dict[bytes, int] = {}
    for lkey, lc in v.terms.items():
        l_members = np.frombuffer(lkey, dtype=np.int16)
        for mkey, mc in u.terms.items():
            m_members = np.frombuffer(mkey, dtype=np.int16)
            terms = _transitive_pair(kg, hg, gg, lkey, l_members, mkey, m_members, method)
            c = lc * mc
            for key, mult in terms.items():
                acc[key] = acc.get(key, 0) + c * mult
    out.terms = {k: v2 for k, v2 in acc.items() if v2}
    return out


def _transitive_pair(kg, hg, gg, lkey, l_members, mkey, m_members, method) -> dict[bytes, int]:
    if method == "both":
        fast = _transitive_pair(kg, hg, gg, lkey, l_members, mkey, m_members, "mackey")
        slow = _transitive_pair(kg, hg, gg, lkey, l_members, mkey, m_members, "orbit")
        if fast != slow:
            raise AssertionError(
                "composition referee disagreement: star product vs orbit method "
                f"on {kg.name} <- {hg.name} <- {gg.name}")
        return fast
    memo_key = (kg.uid, hg.uid, gg.uid, lkey, mkey, method)
    got = _COMPOSE_MEMO.get(memo_key)
    if got is None:
        fn = _compose_transitive_mackey if method == "mackey" else _compose_transitive_orbit
        got = fn(kg, hg, gg, l_members, m_members)
        _COMPOSE_MEMO[memo_key] = got
    return got


def apply_to_element(u: BisetMorphism, x: BurnsideElement, method: str = "mackey") -> BurnsideElement:
    """Evaluate the morphism on an element of B(source)."""
    if x.group.uid != u.source.uid:
        raise InvalidParametersError("element lives over the wrong group")
    return compose(u, BisetMorphism.from_element(x), method).to_element()


# --------------------------------------------------------------------------
# concrete bisets and the elementary morphisms


def from_concrete_biset(source: Group, target: Group,
                        left_act: np.ndarray, right_act: np.ndarray) -> BisetMorphism:
    """Decompose an explicit (target, source)-biset given by action tables:
    left_act[t, x] = t.x and right_act[x, s] = x.s."""
    npts = left_act.shape[1]
    if right_act.shape[0] != npts:
        raise InvalidParametersError("action tables disagree on the point count")
    if not (left_act[0] == np.arange(npts)).all() or not (right_act[:, 0] == np.arange(npts)).all():
        raise InvalidParametersError("identities must act trivially")
    prod_out = _product(target, source)
    perms = []
    for t in (target.generators() or ()):
        perms.append(np.asarray(left_act[int(t)], dtype=np.int64))
    for s in (source.generators() or ()):
        perms.append(np.asarray(right_act[:, int(s)], dtype=np.int64))
    labels = _components(npts, perms)
    out = BisetMorphism(source, target)
    for orbit in np.unique(labels):
        x0 = int(np.nonzero(labels == orbit)[0][0])
        col = right_act[x0, source.inv]           # x0 . s^-1 over s
        hit = left_act[:, col] == x0              # [t, s]: t . x0 . s^-1 == x0
        ts, ss = np.nonzero(hit)
        members = ts * source.n + ss
        key = prod_out.canonical_subgroup_key([int(m) for m in members])
        out.terms[key] = out.terms.get(key, 0) + 1
    return out


_SUBGROUP_GROUP_CACHE: dict[tuple[int, bytes], tuple[Group, np.ndarray]] = {}


def cached_subgroup_group(g: Group, members: Sequence[int]) -> tuple[Group, np.ndarray]:
    arr = np.asarray(sorted(int(x) for x in members), dtype=np.int16)
    key = (g.uid, arr.tobytes())
    got = _SUBGROUP_GROUP_CACHE.get(key)
    if got is None:
        got = subgroup_as_group(g, [int(x) for x in arr])
        _SUBGROUP_GROUP_CACHE[key] = got
    return got


def cached_section(g: Group, top: Sequence[int], bottom: Sequence[int]) -> Section:
    return make_section(g, sorted(int(x) for x in top), sorted(int(x) for x in bottom))


def induction(g: Group, members: Sequence[int]) -> BisetMorphism:
    """Ind: subgroup-as-group -> g, the set g with two-sided multiplication."""
    sub, inc = cached_subgroup_group(g, members)
    left = g.mul
    right = g.mul[:, inc]
    return from_concrete_biset(sub, g, left, right)


def restriction(g: Group, members: Sequence[int]) -> BisetMorphism:
    """Res: g -> subgroup-as-group."""
    sub, inc = cached_subgroup_group(g, members)
    left = g.mul[inc, :]
    right = g.mul
    return from_concrete_biset(g, sub, left, right)


def inflation(g: Group, normal: Sequence[int]) -> BisetMorphism:
    """Inf: quotient -> g along the projection."""
    sec = cached_section(g, range(g.n), normal)
    q = sec.quotient
    left = q.mul[sec.proj[: g.n], :]
    right = q.mul
    return from_concrete_biset(q, g, left, right)


def deflation(g: Group, normal: Sequence[int]) -> BisetMorphism:
    """Def: g -> quotient along the projection."""
    sec = cached_section(g, range(g.n), normal)
    q = sec.quotient
    left = q.mul
    right = q.mul[:, sec.proj[: g.n]]
    return from_concrete_biset(g, q, left, right)


def transport(source: Group, target: Group, phi: np.ndarray) -> BisetMorphism:
    """Iso(phi): source -> target along the isomorphism element map phi."""
    phi = np.asarray(phi, dtype=np.int64)
    if sorted(int(x) for x in phi) != list(range(target.n)) or int(phi[0]) != 0:
        raise InvalidParametersError("phi is not a bijective identity-preserving map")
    for a in range(source.n):
        for b in range(source.n):
            if int(phi[source.mul[a, b]]) != int(target.mul[phi[a], phi[b]]):
                raise InvalidParametersError("phi is not a homomorphism")
    left = target.mul
    right = target.mul[:, phi]
    return from_concrete_biset(source, target, left, right)


def induction_inflation(g: Group, sec: Section) -> BisetMorphism:
    """Indinf for the section (T, S): the (g, T/S)-biset g/S."""
    s_arr = np.asarray(sec.bottom, dtype=np.int16)
    cosets = _coset_space(g, s_arr)
    t_reps = _section_transversal(g, sec)
    left = cosets.coset_id[g.mul[:, cosets.reps]]
    right = cosets.coset_id[g.mul[np.ix_(cosets.reps, t_reps)]]
    return from_concrete_biset(sec.quotient, g, left, right)


def deflation_restriction(g: Group, sec: Section) -> BisetMorphism:
    """Defres for the section (T, S): the (T/S, g)-biset S\\g."""
    s_arr = np.asarray(sec.bottom, dtype=np.int16)
    coset_id = np.full(g.n, -1, dtype=np.int32)
    reps: list[int] = []
    for w in range(g.n):
        if coset_id[w] < 0:
            coset_id[g.mul[s_arr, w]] = len(reps)
            reps.append(w)
    reps_arr = np.array(reps, dtype=np.int16)
    t_reps = _section_transversal(g, sec)
    left = coset_id[g.mul[np.ix_(t_reps, reps_arr)]]
    right = coset_id[g.mul[reps_arr, :]]
    return from_concrete_biset(g, sec.quotient, left, right)


def _section_transversal(g: Group, sec: Section) -> np.ndarray:
    """One representative in T for each element of the quotient T/S."""
    out = np.zeros(sec.quotient.n, dtype=np.int16)
    for t in sec.top:
        q = int(sec.proj[t])
        if out[q] == 0:
            out[q] = t
    out[0] = 0
    return out


def elementary(kind: str, g: Group, data) -> BisetMorphism:
    """Dispatcher for the elementary morphisms.

    kind/data: Ind/Res take subgroup members; Inf/Def take normal subgroup
    members; Iso takes (source, target, phi); Indinf/Defres take a Section
    of g; Id ignores data.
    """
    kind = kind.lower()
    if kind == "ind":
        return induction(g, data)
    if kind == "res":
        return restriction(g, data)
    if kind == "inf":
        return inflation(g, data)
    if kind == "def":
        return deflation(g, data)
    if kind == "iso":
        source, target, phi = data
        return transport(source, target, phi)
    if kind == "indinf":
        return induction_inflation(g, data)
    if kind == "defres":
        return deflation_restriction(g, data)
    if kind == "id":
        return BisetMorphism.identity(g)
    raise InvalidParametersError(f"unknown elementary kind {kind!r}")


# --------------------------------------------------------------------------
# factorization of a transitive morphism


@dataclass
class FactorizationData:
    """Five-fold factorization of the transitive biset of L <= H x G."""

    l_members: tuple[int, ...]
    p1: tuple[int, ...]
    k1: tuple[int, ...]
    p2: tuple[int, ...]
    k2: tuple[int, ...]
    phi: np.ndarray                  # p2/k2 quotient -> p1/k1 quotient element map
    factors: tuple[BisetMorphism, ...]  # ind, inf, iso, def, res (target to source)

    def composite(self, method: str = "mackey") -> BisetMorphism:
        ind, inf, iso, dfl, res = self.factors
        return compose(ind, compose(inf, compose(iso, compose(dfl, res, method), method), method), method)


def factorize(h_grp: Group, g_grp: Group, l_members: Sequence[int]) -> FactorizationData:
    """Split (H x G)/L as Ind o Inf o Iso o Def o Res through the sections
    (p1(L), k1(L)) of H and (p2(L), k2(L)) of G."""
    mem = np.asarray(sorted(int(x) for x in l_members), dtype=np.int64)
    hs, gs = np.divmod(mem, g_grp.n)
    p1 = sorted(set(int(x) for x in hs))
    p2 = sorted(set(int(x) for x in gs))
    k1 = sorted(int(h) for h, g in zip(hs, gs) if g == 0)
    k2 = sorted(int(g) for h, g in zip(hs, gs) if h == 0)

    p1_grp, inc1 = cached_subgroup_group(h_grp, p1)
    p2_grp, inc2 = cached_subgroup_group(g_grp, p2)
    pos1 = {int(x): i for i, x in enumerate(inc1)}
    pos2 = {int(x): i for i, x in enumerate(inc2)}
    sec1 = cached_section(p1_grp, range(p1_grp.n), [pos1[x] for x in k1])
    sec2 = cached_section(p2_grp, range(p2_grp.n), [pos2[x] for x in k2])
    b1, b2 = sec1.quotient, sec2.quotient
    if b1.n != b2.n:
        raise AssertionError("section quotients of a subgroup must have equal order")
    phi = np.full(b2.n, -1, dtype=np.int64)
    for h, g in zip(hs, gs):
        phi[sec2.proj[pos2[int(g)]]] = int(sec1.proj[pos1[int(h)]])
    ind = induction(h_grp, p1)
    inf = inflation(p1_grp, [int(x) for x in sec1.bottom])
    iso = transport(b2, b1, phi)
    dfl = deflation(p2_grp, [int(x) for x in sec2.bottom])
    res = restriction(g_grp, p2)
    return FactorizationData(
        l_members=tuple(int(x) for x in mem),
        p1=tuple(p1), k1=tuple(k1), p2=tuple(p2), k2=tuple(k2),
        phi=phi, factors=(ind, inf, iso, dfl, res))


# --------------------------------------------------------------------------
# twisted diagonals, faithful idempotents, gamma


def twisted_diagonal(g: Group, b_members: Sequence[int], a_members: Sequence[int]) -> list[int]:
    """Members of Delta_{B,A} = {(u, v) in B x B : u v^-1 in A} inside g x g.
    Requires A normal in B."""
    b_arr = np.asarray(sorted(int(x) for x in b_members), dtype=np.int16)
    a_arr = np.asarray(sorted(int(x) for x in a_members), dtype=np.int16)
    a_set = set(int(x) for x in a_arr)
    for t in b_arr:
        if set(int(x) for x in g.conj[t, a_arr]) != a_set:
            raise InvalidParametersError("twist subgroup must be normal in the base")
    pairs = g.mul[np.ix_(a_arr, b_arr)].astype(np.int64) * g.n + b_arr.astype(np.int64)[None, :]
    return sorted(int(x) for x in pairs.ravel())


_NORMAL_POSET_CACHE: dict[int, tuple[FinitePoset, list[tuple[int, ...]]]] = {}


def normal_poset(g: Group) -> tuple[FinitePoset, list[tuple[int, ...]]]:
    """Poset of normal subgroups under inclusion, with their member tuples."""
    got = _NORMAL_POSET_CACHE.get(g.uid)
    if got is None:
        normals = [tuple(int(x) for x in c.rep) for c in g.normal_subgroup_classes()]
        masks = [sum(1 << m for m in mem) for mem in normals]
        leq = [[(masks[i] & ~masks[j]) == 0 for j in range(len(masks))]
               for i in range(len(masks))]
        got = (FinitePoset(list(range(len(normals))), leq), normals)
        _NORMAL_POSET_CACHE[g.uid] = got
    return got


def faithful_idempotent(g: Group, n_members: Sequence[int]) -> BisetMorphism:
    """f_N: alternating sum of Inf o Def through normal subgroups above N,
    weighted by the Moebius function of the normal-subgroup poset."""
    poset, normals = normal_poset(g)
    n_sorted = tuple(sorted(int(x) for x in n_members))
    try:
        n_idx = normals.index(n_sorted)
    except ValueError:
        raise InvalidParametersError("subgroup is not normal in the group") from None
    out = BisetMorphism(g, g)
    for m_idx, m_mem in enumerate(normals):
        if not poset.leq[n_idx][m_idx]:
            continue
        mu = poset.mobius(n_idx, m_idx)
        if mu == 0:
            continue
        delta = twisted_diagonal(g, range(g.n), m_mem)
        key = out.prod.canonical_subgroup_key(delta)
        out.terms[key] = out.terms.get(key, 0) + mu
    out.terms = {k: v for k, v in out.terms.items() if v}
    return out


def omega_poset_idempotent(g: Group) -> BisetMorphism:
    """f_1 computed from the subgroup poset of the largest central
    elementary abelian subgroup (cross-check route for the normal-poset
    formula)."""
    from .groups import omega1_center
    om = omega1_center(g)
    sub, inc = cached_subgroup_group(g, om)
    classes = sub.subgroup_classes()
    members = [tuple(sorted(int(inc[x]) for x in c.rep)) for c in classes]
    masks = [sum(1 << m for m in mem) for mem in members]
    leq = [[(masks[i] & ~masks[j]) == 0 for j in range(len(masks))]
           for i in range(len(masks))]
    poset = FinitePoset(list(range(len(members))), leq)
    out = BisetMorphism(g, g)
    for idx, mem in enumerate(members):
        mu = poset.mobius(0, idx)
        if mu == 0:
            continue
        delta = twisted_diagonal(g, range(g.n), mem)
        key = out.prod.canonical_subgroup_key(delta)
        out.terms[key] = out.terms.get(key, 0) + mu
    out.terms = {k: v for k, v in out.terms.items() if v}
    return out


def gamma_idempotent(r: Group, q_members: Sequence[int]) -> BisetMorphism:
    """gamma_Q for a genetic subgroup Q of R: the difference of the twisted
    diagonals along (N_R(Q), Q) and (N_R(Q), Qhat); the one-point biset for
    Q = R."""
    q_sorted = sorted(int(x) for x in q_members)
    if len(q_sorted) == r.n:
        full = list(range(r.n * r.n))
        return BisetMorphism.transitive(r, r, full)
    ld = local_data(r, q_sorted)
    if ld.qhat_members is None:
        raise InvalidParametersError("subgroup has no cyclic socle over it; not genetic")
    d1 = twisted_diagonal(r, ld.normalizer, ld.members)
    d2 = twisted_diagonal(r, ld.normalizer, ld.qhat_members)
    return (BisetMorphism.transitive(r, r, d1)
            - BisetMorphism.transitive(r, r, d2))


# --------------------------------------------------------------------------
# the product shift and the tilde twist


def shift_morphism(u: BisetMorphism, h_sh: Group) -> BisetMorphism:
    """Cross the morphism with a fixed group: G x H -> T x H, sending the
    biset U to U x H with the extra coordinate multiplied through."""
    from .groups import product_group
    src = product_group([u.source, h_sh], _MORPHISM_PROD_CAP)
    tgt = product_group([u.target, h_sh], _MORPHISM_PROD_CAP)
    out = BisetMorphism(src, tgt)
    ns, nh = u.source.n, h_sh.n
    for key, c in u.terms.items():
        members = np.frombuffer(key, dtype=np.int16).astype(np.int64)
        y, x = np.divmod(members, ns)
        ls = np.arange(nh, dtype=np.int64)
        new = ((y[:, None] * nh + ls[None, :]) * (ns * nh)
               + x[:, None] * nh + ls[None, :]).ravel()
        k2 = out.prod.canonical_subgroup_key([int(m) for m in new])
        out.terms[k2] = out.terms.get(k2, 0) + c
    out.terms = {k: v for k, v in out.terms.items() if v}
    return out


def tilde_morphism(u: BisetMorphism, p_grp: Group, x_grp: Group) -> BisetMorphism:
    """Twist a transitive (Q, P x X)-biset U into the (X x Q, P)-biset that
    is U as a set, with (x, h) . u . g = h . u . (g, x^-1)."""
    from .groups import product_group
    q_grp = u.target
    if len(u.terms) != 1 or next(iter(u.terms.values())) != 1:
        raise InvalidParametersError("tilde twist is defined on a transitive biset")
    if u.source.n != p_grp.n * x_grp.n:
        raise InvalidParametersError("source must be the product P x X")
    key = next(iter(u.terms.keys()))
    members = np.frombuffer(key, dtype=np.int16)
    cosets = _coset_space(u.prod, members)
    xq = product_group([x_grp, q_grp], _MORPHISM_PROD_CAP)
    npx = p_grp.n * x_grp.n
    # ((x,h), g) acts on a coset as left multiplication by (h, (g, x))
    left = np.empty((xq.n, cosets.nn), dtype=np.int32)
    for xe in range(x_grp.n):
        for h in range(q_grp.n):
            elem = h * npx + xe       # (h, (1_P, x))
            left[xe * q_grp.n + h] = cosets.left_map(int(elem))
    right = np.empty((cosets.nn, p_grp.n), dtype=np.int32)
    for g in range(p_grp.n):
        elem = int(p_grp.inv[g]) * x_grp.n   # (1_Q, (g^-1, 1_X))
        right[:, g] = cosets.left_map(elem)
    return from_concrete_biset(p_grp, xq, left, right)


def external_element(x: BurnsideElement, y: BurnsideElement) -> BisetMorphism:
    """External product B(G) x B(H) -> B(G x H), as a morphism from the
    trivial group (the product group may be too large to enumerate)."""
    from .groups import product_group
    gx, gy = x.group, y.group
    prod = product_group([gx, gy], _MORPHISM_PROD_CAP)
    out = BisetMorphism(trivial_group(), prod)
    cx = gx.subgroup_classes()
    cy = gy.subgroup_classes()
    for i, ci in x.coeffs.items():
        ai = cx[i].rep.astype(np.int64)
        for j, cj in y.coeffs.items():
            bj = cy[j].rep.astype(np.int64)
            members = (ai[:, None] * gy.n + bj[None, :]).ravel()
            key = out.prod.canonical_subgroup_key([int(m) for m in members])
            out.terms[key] = out.terms.get(key, 0) + ci * cj
    out.terms = {k: v for k, v in out.terms.items() if v}
    return out
