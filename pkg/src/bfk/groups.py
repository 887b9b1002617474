"""Finite p-groups as explicit multiplication tables.

A group is a table on element indices 0..n-1 with identity 0.  Everything
downstream (subgroup lattices, conjugacy, marks, biset composition) reads
this table, so groups stay uniform and exact at desk scale.  Tables are
numpy int16; set arithmetic on subgroups uses sorted member arrays and the
precomputed conjugation table, which makes lattice enumeration mostly
vectorized.

Subgroup conjugacy classes are ordered by the canonical key
(order, lexicographically minimal sorted member list over the conjugates),
so every basis ordering derived from them is deterministic.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import CapExceededError, InvalidParametersError, UnknownNameError

DEFAULT_CAP = 256

_uid_counter = itertools.count()


def _prime_power(n: int) -> Optional[tuple[int, int]]:
    """(p, k) with n = p**k, or None.  n = 1 gives (1, 0)."""
    if n == 1:
        return (1, 0)
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


class Group:
    """Finite group given by its multiplication table, identity at index 0."""

    def __init__(self, mul: np.ndarray, name: str, prime: int, check: bool = True):
        self.mul = np.ascontiguousarray(mul, dtype=np.int16)
        self.n = int(self.mul.shape[0])
        self.name = name
        self.prime = prime
        self.uid = next(_uid_counter)
        inv = np.empty(self.n, dtype=np.int16)
        rows, cols = np.nonzero(self.mul == 0)
        inv[rows] = cols
        self.inv = inv
        self._conj: Optional[np.ndarray] = None
        self._orders: Optional[np.ndarray] = None
        self._gens: Optional[tuple[int, ...]] = None
        self._classes: Optional[list["SubgroupClass"]] = None
        self._class_lookup: Optional[dict[bytes, int]] = None
        self._center: Optional[tuple[int, ...]] = None
        if check:
            self.check_axioms()

    # -- table axioms ----------------------------------------------------

    def check_axioms(self) -> None:
        n, mul = self.n, self.mul
        if mul.shape != (n, n):
            raise InvalidParametersError("multiplication table is not square")
        ar = np.arange(n, dtype=np.int16)
        if not (mul[0] == ar).all() or not (mul[:, 0] == ar).all():
            raise InvalidParametersError("index 0 is not a two-sided identity")
        for a in range(n):
            if len(np.unique(mul[a])) != n:
                raise InvalidParametersError("table rows are not permutations")
        if n <= 64:
            left = mul[mul, :]          # [a, b, c] = mul[mul[a, b], c]
            right = mul[:, mul]         # [a, b, c] = mul[a, mul[b, c]]
            if not (left == right).all():
                raise InvalidParametersError("multiplication is not associative")
        else:
            rng = np.random.default_rng(self.n)
            for _ in range(2000):
                a, b, c = rng.integers(0, n, 3)
                if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                    raise InvalidParametersError("multiplication is not associative")

    # -- cached element data ----------------------------------------------

    @property
    def conj(self) -> np.ndarray:
        """conj[g, x] = g^-1 x g."""
        if self._conj is None:
            t = self.mul[self.inv, :]
            self._conj = self.mul[t, np.arange(self.n, dtype=np.int16)[:, None]]
        return self._conj

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.n
            ar = np.arange(n, dtype=np.int16)
            cur = ar.copy()
            orders = np.zeros(n, dtype=np.int64)
            orders[0] = 1
            k = 1
            while (orders == 0).any():
                k += 1
                if k > n:
                    raise InvalidParametersError("element orders exceed group order")
                cur = self.mul[cur, ar]
                hit = (cur == 0) & (orders == 0)
                orders[hit] = k
            self._orders = orders
        return self._orders

    def exponent(self) -> int:
        e = 1
        for o in set(int(x) for x in self.element_orders()):
            e = e * o // gcd(e, o)
        return e

    def order_profile(self) -> tuple[tuple[int, int], ...]:
        vals, counts = np.unique(self.element_orders(), return_counts=True)
        return tuple((int(v), int(c)) for v, c in zip(vals, counts))

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    def center(self) -> tuple[int, ...]:
        if self._center is None:
            central = (self.mul == self.mul.T).all(axis=1)
            self._center = tuple(int(x) for x in np.nonzero(central)[0])
        return self._center

    def generators(self) -> tuple[int, ...]:
        """Small deterministic generating sequence (greedy closure growth)."""
        if self._gens is None:
            gens: list[int] = []
            cl = {0}
            while len(cl) < self.n:
                orders = self.element_orders()
                best = max((x for x in range(self.n) if x not in cl),
                           key=lambda x: (orders[x], -x))
                gens.append(int(best))
                cl = set(self.closure(gens))
            self._gens = tuple(gens)
        return self._gens

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Sorted member array of the subgroup generated by gens."""
        members = {0}
        members.update(int(g) for g in gens)
        while True:
            arr = np.fromiter(members, dtype=np.int64)
            prods = self.mul[np.ix_(arr, arr)]
            new = set(int(x) for x in np.unique(prods)) - members
            if not new:
                break
            members |= new
        return np.array(sorted(members), dtype=np.int16)

    def power(self, x: int, k: int) -> int:
        r = 0
        for _ in range(k):
            r = int(self.mul[r, x])
        return r

    # -- subgroup machinery ------------------------------------------------

    def conjugates_sorted(self, members: np.ndarray) -> np.ndarray:
        """All conjugates of a subgroup, each row a sorted member array; rows
        in lexicographic order (row 0 is the canonical representative)."""
        c = self.conj[:, members]
        c.sort(axis=1)
        return np.unique(c, axis=0)

    def canonical_subgroup_key(self, members: Sequence[int]) -> bytes:
        arr = np.asarray(sorted(int(m) for m in members), dtype=np.int16)
        c = self.conj[:, arr]
        c.sort(axis=1)
        first = np.lexsort(c.T[::-1])[0]
        return np.ascontiguousarray(c[first]).tobytes()

    def normalizer(self, members: np.ndarray) -> np.ndarray:
        srt = np.sort(np.asarray(members, dtype=np.int16))
        c = self.conj[:, srt]
        c.sort(axis=1)
        keep = (c == srt).all(axis=1)
        return np.nonzero(keep)[0].astype(np.int16)

    def centralizer(self, members: Sequence[int]) -> np.ndarray:
        arr = np.asarray(list(members), dtype=np.int16)
        keep = (self.conj[:, arr] == arr).all(axis=1)
        return np.nonzero(keep)[0].astype(np.int16)

    def subgroup_classes(self) -> list["SubgroupClass"]:
        if self._classes is None:
            self._build_classes()
        return self._classes

    def class_lookup(self) -> dict[bytes, int]:
        if self._class_lookup is None:
            self._build_classes()
        return self._class_lookup

    def class_of(self, members: Sequence[int]) -> int:
        key = np.asarray(sorted(int(m) for m in members), dtype=np.int16).tobytes()
        idx = self.class_lookup().get(key)
        if idx is None:
            raise ValueError("member set is not a subgroup of this group")
        return idx

    def _build_classes(self) -> None:
        if self.prime == 1:
            rec = SubgroupClass(self, 0, np.array([0], dtype=np.int16),
                                np.array([[0]], dtype=np.int16),
                                np.array([0], dtype=np.int16))
            self._classes = [rec]
            self._class_lookup = {rec.rep.tobytes(): 0}
            return
        p = self.prime
        raw: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []  # (rep, conjs, normalizer)
        seen: dict[bytes, int] = {}

        def register(members: np.ndarray) -> int:
            conjs = self.conjugates_sorted(members)
            rep = conjs[0]
            idx = len(raw)
            for row in conjs:
                seen[row.tobytes()] = idx
            nsrt = self.normalizer(rep)
            raw.append((rep, conjs, nsrt))
            return idx

        register(np.array([0], dtype=np.int16))
        layer = [0]
        size = 1
        orders = self.element_orders()
        while size < self.n:
            nxt: list[int] = []
            for ci in layer:
                rep, _, norm = raw[ci]
                in_s = np.zeros(self.n, dtype=bool)
                in_s[rep] = True
                pw = norm.copy()
                for _ in range(p - 1):
                    pw = self.mul[pw, norm]
                cand = norm[~in_s[norm] & in_s[pw]]
                for x in cand:
                    xp = [0]
                    for _ in range(p - 1):
                        xp.append(int(self.mul[xp[-1], x]))
                    new_members = np.unique(self.mul[np.ix_(rep, np.array(xp, dtype=np.int16))])
                    key = new_members.astype(np.int16).tobytes()
                    idx = seen.get(key)
                    if idx is None:
                        idx = register(new_members.astype(np.int16))
                        nxt.append(idx)
            layer = nxt
            size *= p
            if not layer and size < self.n:
                raise AssertionError("subgroup layering stalled; broken table?")
        order_key = sorted(range(len(raw)),
                           key=lambda i: (len(raw[i][0]), raw[i][0].tobytes()))
        classes = []
        lookup = {}
        for new_idx, old_idx in enumerate(order_key):
            rep, conjs, norm = raw[old_idx]
            rec = SubgroupClass(self, new_idx, rep, conjs, norm)
            classes.append(rec)
            for row in conjs:
                lookup[row.tobytes()] = new_idx
        self._classes = classes
        self._class_lookup = lookup

    def normal_subgroup_classes(self) -> list["SubgroupClass"]:
        return [c for c in self.subgroup_classes() if c.size == 1]

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.n})"


class SubgroupClass:
    """One conjugacy class of subgroups, with canonical representative."""

    __slots__ = ("group", "index", "rep", "conjugates", "normalizer_members",
                 "_masks", "_cyclic")

    def __init__(self, group: Group, index: int, rep: np.ndarray,
                 conjugates: np.ndarray, normalizer_members: np.ndarray):
        self.group = group
        self.index = index
        self.rep = rep
        self.conjugates = conjugates
        self.normalizer_members = normalizer_members
        self._masks: Optional[list[int]] = None
        self._cyclic: Optional[bool] = None

    @property
    def order(self) -> int:
        return len(self.rep)

    @property
    def size(self) -> int:
        return len(self.conjugates)

    @property
    def masks(self) -> list[int]:
        if self._masks is None:
            self._masks = [_members_mask(row) for row in self.conjugates]
        return self._masks

    @property
    def rep_mask(self) -> int:
        return self.masks[0]

    def is_cyclic(self) -> bool:
        if self._cyclic is None:
            orders = self.group.element_orders()
            self._cyclic = bool((orders[self.rep] == self.order).any())
        return self._cyclic

    def is_normal(self) -> bool:
        return self.size == 1

    def __repr__(self) -> str:
        return f"SubgroupClass(#{self.index}, order={self.order}, size={self.size})"


def _members_mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << int(x)
    return m


@dataclass(frozen=True)
class Section:
    """A section (T, S) of a group: S normal in T, with the quotient group."""

    group: Group
    top: tuple[int, ...]
    bottom: tuple[int, ...]
    quotient: Group
    proj: np.ndarray  # element index of group -> quotient index, -1 outside T


@dataclass
class LocalData:
    """Normalizer-local data of a subgroup Q <= P."""

    group: Group
    members: tuple[int, ...]            # Q
    normalizer: tuple[int, ...]         # N_P(Q)
    centralizer: tuple[int, ...]        # C_P(Q)
    section: Section                    # (N_P(Q), Q) with quotient N/Q
    zp_members: tuple[int, ...]         # Z_P(Q): preimage of Z(N/Q)
    qhat_members: Optional[tuple[int, ...]]  # preimage of the order-<=p socle, if cyclic
    quotient_type: str                  # Cyclic | Quaternion | Dihedral | Semidihedral | NotRank1


# --------------------------------------------------------------------------
# catalog constructors


def _cyclic_table(n: int) -> np.ndarray:
    ar = np.arange(n)
    return ((ar[:, None] + ar[None, :]) % n).astype(np.int16)


def _two_part_table(m: int, combine: Callable[[int, int, int, int], tuple[int, int]]) -> np.ndarray:
    """Order-2m table on pairs (a, e) -> index a + m*e."""
    n = 2 * m
    t = np.empty((n, n), dtype=np.int16)
    for i in range(n):
        a, e = i % m, i // m
        for j in range(n):
            b, f = j % m, j // m
            c, g = combine(a, e, b, f)
            t[i, j] = (c % m) + m * (g % 2)
    return t


def _dihedral_table(n: int) -> np.ndarray:
    m = n // 2
    return _two_part_table(m, lambda a, e, b, f: (a + (b if e == 0 else -b), e ^ f))


def _semidihedral_table(n: int) -> np.ndarray:
    m = n // 2
    t = m // 2 - 1  # conjugation twist r -> r^(m/2 - 1)
    return _two_part_table(m, lambda a, e, b, f: (a + (b if e == 0 else t * b), e ^ f))


def _quaternion_table(n: int) -> np.ndarray:
    m = n // 2
    return _two_part_table(
        m, lambda a, e, b, f: (a + (b if e == 0 else -b) + (m // 2 if e and f else 0), e ^ f))


def _elementary_abelian_table(p: int, k: int) -> np.ndarray:
    n = p ** k
    digits = np.zeros((n, k), dtype=np.int64)
    x = np.arange(n)
    for i in range(k):
        digits[:, i] = (x // p ** i) % p
    t = np.zeros((n, n), dtype=np.int16)
    for i in range(n):
        s = (digits[i] + digits) % p
        t[i] = (s * (p ** np.arange(k))).sum(axis=1)
    return t


def _heisenberg_table(p: int) -> np.ndarray:
    """Upper unitriangular 3x3 over F_p: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')."""
    n = p ** 3
    t = np.empty((n, n), dtype=np.int16)
    for i in range(n):
        a, b, c = i // (p * p), (i // p) % p, i % p
        for j in range(n):
            a2, b2, c2 = j // (p * p), (j // p) % p, j % p
            t[i, j] = (((a + a2) % p) * p + (b + b2) % p) * p + (c + c2 + a * b2) % p
    return t


_GROUP_CACHE: dict[str, Group] = {}
_PRODUCT_CACHE: dict[tuple[int, int], "Product"] = {}

_ALIASES = {"1": "C1", "E4": "E2_2", "E9": "E3_2", "E8": "E2_3", "E27": "E3_3"}


def build_group(spec: str, cap: int = DEFAULT_CAP) -> Group:
    """Build a catalog group: C<n> | D<n> | SD<n> | Q<n> | E<p>_<k> | X<p> | <A>x<B>."""
    spec = _ALIASES.get(spec.strip(), spec.strip())
    cached = _GROUP_CACHE.get(spec)
    if cached is not None:
        return cached
    if "x" in spec:
        parts = spec.split("x")
        if any(not s for s in parts):
            raise UnknownNameError(f"bad product spec: {spec!r}")
        g = build_group(parts[0], cap)
        for part in parts[1:]:
            h = build_group(part, cap)
            g = direct_product(g, h, cap).group
        _GROUP_CACHE[spec] = g
        return g
    m = re.fullmatch(r"(C|D|SD|Q|X|E)(\d+)(?:_(\d+))?", spec)
    if not m:
        raise UnknownNameError(f"unknown group spec: {spec!r}")
    fam, num, sub = m.group(1), int(m.group(2)), m.group(3)
    if fam == "E":
        if sub is None:
            raise UnknownNameError(f"elementary abelian groups are written E<p>_<k>: {spec!r}")
        p, k = num, int(sub)
        if _prime_power(p) != (p, 1):
            raise InvalidParametersError(f"E{p}_{k}: {p} is not prime")
        order = p ** k
        _check_cap(order, cap, spec)
        table = _elementary_abelian_table(p, k)
        prime = p
    elif sub is not None:
        raise UnknownNameError(f"unknown group spec: {spec!r}")
    elif fam == "C":
        pp = _prime_power(num)
        if pp is None:
            raise InvalidParametersError(f"C{num}: order must be a prime power")
        _check_cap(num, cap, spec)
        table = _cyclic_table(num)
        prime = pp[0]
    elif fam == "X":
        p = num
        if _prime_power(p) != (p, 1):
            raise InvalidParametersError(f"X{p}: {p} is not prime")
        _check_cap(p ** 3, cap, spec)
        table = _dihedral_table(8) if p == 2 else _heisenberg_table(p)
        prime = p
    else:
        pp = _prime_power(num)
        if pp is None or pp[0] != 2:
            raise InvalidParametersError(f"{spec}: order must be a power of 2")
        minimum = {"D": 8, "SD": 16, "Q": 8}[fam]
        if num < minimum:
            raise InvalidParametersError(f"{spec}: {fam}-family needs order >= {minimum}")
        _check_cap(num, cap, spec)
        table = {"D": _dihedral_table, "SD": _semidihedral_table, "Q": _quaternion_table}[fam](num)
        prime = 2
    g = Group(table, spec, prime)
    _GROUP_CACHE[spec] = g
    return g


def _check_cap(order: int, cap: int, spec: str) -> None:
    if order > cap:
        raise CapExceededError(f"{spec}: order {order} exceeds cap {cap}")


def trivial_group() -> Group:
    return build_group("C1")


@dataclass(frozen=True)
class Product:
    """Direct product with its embeddings (as element maps) and projections."""

    group: Group
    left: Group
    right: Group

    def pair(self, g: int, h: int) -> int:
        return g * self.right.n + h

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.right.n)

    def embed_left(self, g: int) -> int:
        return g * self.right.n

    def embed_right(self, h: int) -> int:
        return h

    def proj_left(self, x: int) -> int:
        return x // self.right.n

    def proj_right(self, x: int) -> int:
        return x % self.right.n


def direct_product(g: Group, h: Group, cap: int = DEFAULT_CAP) -> Product:
    key = (g.uid, h.uid)
    cached = _PRODUCT_CACHE.get(key)
    if cached is not None:
        return cached
    order = g.n * h.n
    if order > cap:
        raise CapExceededError(
            f"product {g.name} x {h.name}: order {order} exceeds cap {cap}")
    if g.prime != 1 and h.prime != 1 and g.prime != h.prime:
        raise InvalidParametersError("direct factors must be groups for the same prime")
    ag = np.arange(order) // h.n
    ah = np.arange(order) % h.n
    table = (g.mul[np.ix_(ag, ag)].astype(np.int32) * h.n
             + h.mul[np.ix_(ah, ah)].astype(np.int32)).astype(np.int16)
    prime = g.prime if g.prime != 1 else h.prime
    grp = Group(table, f"{g.name}x{h.name}", prime, check=False)
    prod = Product(grp, g, h)
    _PRODUCT_CACHE[key] = prod
    return prod


def product_group(factors: Sequence[Group], cap: int = DEFAULT_CAP) -> Group:
    """Iterated direct product; index arithmetic is strictly associative."""
    g = factors[0]
    for h in factors[1:]:
        g = direct_product(g, h, cap).group
    return g


# --------------------------------------------------------------------------
# quotients and subgroup-as-group


def subgroup_as_group(g: Group, members: Sequence[int]) -> tuple[Group, np.ndarray]:
    """The subgroup as an abstract group, plus the inclusion element map."""
    mem = sorted(int(x) for x in members)
    if mem[0] != 0:
        raise InvalidParametersError("subgroup must contain the identity")
    pos = {x: i for i, x in enumerate(mem)}
    k = len(mem)
    arr = np.array(mem, dtype=np.int16)
    sub = g.mul[np.ix_(arr, arr)]
    table = np.empty((k, k), dtype=np.int16)
    for i in range(k):
        table[i] = [pos[int(v)] for v in sub[i]]
    prime = g.prime if k > 1 else 1
    grp = Group(table, f"{g.name}|sub{k}", prime, check=False)
    return grp, arr


_SECTION_CACHE: dict[tuple[int, bytes, bytes], Section] = {}


def make_section(g: Group, top: Sequence[int], bottom: Sequence[int]) -> Section:
    """Section (T, S) with its quotient group T/S; raises if S is not normal
    in T.  Cached, so the quotient Group object is stable across calls."""
    t_mem = sorted(int(x) for x in top)
    s_mem = sorted(int(x) for x in bottom)
    cache_key = (g.uid,
                 np.asarray(t_mem, dtype=np.int16).tobytes(),
                 np.asarray(s_mem, dtype=np.int16).tobytes())
    cached = _SECTION_CACHE.get(cache_key)
    if cached is not None:
        return cached
    t_set = set(t_mem)
    if 0 not in t_set or not set(s_mem) <= t_set:
        raise InvalidParametersError("bottom of section must lie inside the top")
    s_arr = np.array(s_mem, dtype=np.int16)
    for t in t_mem:
        conj = np.sort(g.conj[t, s_arr])
        if not (conj == s_arr).all():
            raise InvalidParametersError("bottom of section is not normal in the top")
    proj = np.full(g.n, -1, dtype=np.int32)
    reps: list[int] = []
    for t in t_mem:  # ascending, so identity coset (containing 0) comes first
        if proj[t] < 0:
            idx = len(reps)
            reps.append(t)
            proj[g.mul[t, s_arr]] = idx
    k = len(reps)
    table = np.empty((k, k), dtype=np.int16)
    rep_arr = np.array(reps, dtype=np.int16)
    for i in range(k):
        table[i] = proj[g.mul[reps[i], rep_arr]]
    prime = g.prime if k > 1 else 1
    quot = Group(table, f"{g.name}/{len(s_mem)}@{k}", prime, check=False)
    sec = Section(g, tuple(t_mem), tuple(s_mem), quot, proj)
    _SECTION_CACHE[cache_key] = sec
    return sec


def quotient(g: Group, normal: Sequence[int]) -> Section:
    """Quotient of g by a normal subgroup, as the section (G, N)."""
    return make_section(g, range(g.n), normal)


# --------------------------------------------------------------------------
# isomorphism testing


def _iso_invariants(g: Group):
    der = g.closure(_commutators(g))
    return (g.n, g.is_abelian(), g.order_profile(), len(g.center()),
            len(der), g.exponent())


def _commutators(g: Group) -> np.ndarray:
    inv = g.inv
    a = g.mul[np.ix_(inv, inv)]
    b = g.mul[a, np.arange(g.n, dtype=np.int16)[:, None]]
    c = g.mul[b, np.arange(g.n, dtype=np.int16)[None, :]]
    return np.unique(c)


def iter_isomorphisms(g: Group, h: Group):
    """Yield every isomorphism g -> h as an element-index map (numpy array)."""
    if g.n != h.n:
        return
    if _iso_invariants(g) != _iso_invariants(h):
        return
    gens = g.generators()
    if not gens:  # trivial group
        yield np.zeros(1, dtype=np.int16)
        return
    g_orders = g.element_orders()
    h_orders = h.element_orders()
    candidates = [np.nonzero(h_orders == g_orders[x])[0] for x in gens]

    def extend(i: int, phi: np.ndarray):
        if i == len(gens):
            img = phi[g.mul]
            if (img == h.mul[phi][:, phi]).all() and len(set(int(x) for x in phi)) == g.n:
                yield phi.copy()
            return
        x = gens[i]
        for y in candidates[i]:
            trial = phi.copy()
            trial[x] = y
            if _propagate(g, h, trial):
                yield from extend(i + 1, trial)

    phi0 = np.full(g.n, -1, dtype=np.int32)
    phi0[0] = 0
    yield from extend(0, phi0)


def _propagate(g: Group, h: Group, phi: np.ndarray) -> bool:
    """Close a partial generator assignment under products; False on clash."""
    known = [x for x in range(g.n) if phi[x] >= 0]
    frontier = list(known)
    known_set = set(known)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(known_set):
                for a, b in ((x, y), (y, x)):
                    z = int(g.mul[a, b])
                    pz = int(h.mul[phi[a], phi[b]])
                    if phi[z] < 0:
                        phi[z] = pz
                        nxt.append(z)
                        known_set.add(z)
                    elif phi[z] != pz:
                        return False
        frontier = nxt
    return True


def is_isomorphic(g: Group, h: Group) -> Optional[np.ndarray]:
    """An isomorphism g -> h as an element map, or None."""
    for phi in iter_isomorphisms(g, h):
        return phi.astype(np.int16)
    return None


# --------------------------------------------------------------------------
# normal p-rank 1 classification and local data


def classify_rank1(g: Group) -> str:
    """Tag among Cyclic / Quaternion / Dihedral / Semidihedral / NotRank1.

    Dihedral and semidihedral only count from order 16 up; quaternion from
    order 8 up.  Everything else (including D8 and Klein groups) is NotRank1.
    """
    n = g.n
    if n == 1 or int(g.element_orders().max()) == n:
        return "Cyclic"
    if g.prime != 2:
        return "NotRank1"
    if n >= 8 and is_isomorphic(g, build_group(f"Q{n}")) is not None:
        return "Quaternion"
    if n >= 16:
        if is_isomorphic(g, build_group(f"D{n}")) is not None:
            return "Dihedral"
        if is_isomorphic(g, build_group(f"SD{n}")) is not None:
            return "Semidihedral"
    return "NotRank1"


def omega1_center(g: Group) -> tuple[int, ...]:
    """Largest elementary abelian subgroup of the center: all central
    elements of order dividing p."""
    if g.n == 1:
        return (0,)
    orders = g.element_orders()
    return tuple(z for z in g.center() if orders[z] in (1, g.prime))


_LOCAL_DATA_CACHE: dict[tuple[int, bytes], LocalData] = {}


def local_data(p_grp: Group, q_members: Sequence[int]) -> LocalData:
    key = (p_grp.uid, np.asarray(sorted(int(x) for x in q_members),
                                 dtype=np.int16).tobytes())
    cached = _LOCAL_DATA_CACHE.get(key)
    if cached is not None:
        return cached
    q_sorted = tuple(sorted(int(x) for x in q_members))
    q_arr = np.array(q_sorted, dtype=np.int16)
    norm = p_grp.normalizer(q_arr)
    cent = p_grp.centralizer(q_arr)
    sec = make_section(p_grp, [int(x) for x in norm], list(q_sorted))
    w = sec.quotient
    zw = set(w.center())
    zp = tuple(sorted(int(x) for x in norm if int(sec.proj[x]) in zw))
    om = omega1_center(w)
    qhat = None
    if len(om) == 1 or (w.prime != 1 and len(om) == w.prime):
        om_set = set(om)
        qhat = tuple(sorted(int(x) for x in norm if int(sec.proj[x]) in om_set))
    out = LocalData(
        group=p_grp,
        members=q_sorted,
        normalizer=tuple(int(x) for x in norm),
        centralizer=tuple(int(x) for x in cent),
        section=sec,
        zp_members=zp,
        qhat_members=qhat,
        quotient_type=classify_rank1(w),
    )
    _LOCAL_DATA_CACHE[key] = out
    return out


# --------------------------------------------------------------------------
# projective plane actions


def projective_plane_data(p: int) -> tuple[Group, np.ndarray, np.ndarray]:
    """Sylow p-subgroup of PGL(3, F_p) with its actions on the p^2+p+1
    points and lines of the projective plane, as left-action tables."""
    if p not in (2, 3):
        raise CapExceededError(f"projective plane data capped to p in {{2, 3}}, got {p}")
    s = build_group("D8") if p == 2 else build_group(f"X{p}")
    # use the unitriangular model for the action; relabel to the catalog group
    heis = Group(_heisenberg_table(p), f"heis{p}", p, check=False)
    phi = is_isomorphic(s, heis)
    assert phi is not None

    def mat(i: int) -> np.ndarray:
        a, b, c = i // (p * p), (i // p) % p, i % p
        return np.array([[1, a, c], [0, 1, b], [0, 0, 1]], dtype=np.int64)

    def norm_col(v: np.ndarray) -> tuple[int, ...]:
        v = v % p
        lead = next(x for x in v if x)
        inv = pow(int(lead), p - 2, p) if p > 2 else 1
        return tuple(int(x) * inv % p for x in v)

    points = sorted({norm_col(np.array(v)) for v in itertools.product(range(p), repeat=3)
                     if any(v)})
    lines = list(points)  # dual coordinates: same normalized triples
    pt_idx = {v: i for i, v in enumerate(points)}
    npts = len(points)
    act_p = np.empty((s.n, npts), dtype=np.int16)
    act_l = np.empty((s.n, npts), dtype=np.int16)
    for g in range(s.n):
        m = mat(int(phi[g]))
        minv = mat(int(phi[int(s.inv[g])]))
        for i, v in enumerate(points):
            act_p[g, i] = pt_idx[norm_col(m @ np.array(v, dtype=np.int64))]
            act_l[g, i] = pt_idx[norm_col(np.array(v, dtype=np.int64) @ minv)]
    return s, act_p, act_l
