"""Exact integer linear algebra over Z.

Row conventions throughout: vectors are rows, a lattice is the row span of
its basis matrix, and a map sends the i-th source generator to the i-th row
of its matrix.  All arithmetic uses Python ints, so there is no overflow and
no floating point anywhere.

The two workhorses are a mutable echelon form (`IntLattice`, built by xgcd
row combinations) and a Smith normal form with a smallest-pivot heuristic.
Everything else (canonical HNF, kernels, finitely presented abelian groups,
maps between them, poset Moebius functions) is layered on top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b and g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class IntLattice:
    """Mutable sublattice of Z^n kept in row echelon form.

    Rows are combined with extended-gcd row operations, so `add` keeps the
    row span exact.  `contains` is back-substitution against the pivots.
    Call `canonical_basis` for the Hermite-normalized basis.
    """

    __slots__ = ("ambient", "rows", "_pivots")

    def __init__(self, ambient: int, rows: Iterable[Sequence[int]] = ()):
        self.ambient = ambient
        self.rows: list[list[int]] = []
        self._pivots: list[int] = []  # pivot column of each row, increasing
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec: Sequence[int]) -> bool:
        """Add a vector to the span. Returns True if the rank grew."""
        if len(vec) != self.ambient:
            raise ValueError("vector length does not match ambient rank")
        vec = list(vec)
        n = self.ambient
        for j in range(n):
            if not vec[j]:
                continue
            k = self._row_with_pivot(j)
            if k is None:
                self._insert(vec, j)
                return True
            row = self.rows[k]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for jj in range(j, n):
                    vec[jj] -= q * row[jj]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                for jj in range(j, n):
                    aa, bb = row[jj], vec[jj]
                    row[jj] = x * aa + y * bb
                    vec[jj] = -bg * aa + ag * bb
        return False

    def contains(self, vec: Sequence[int]) -> bool:
        return self.reduce(vec) is None

    def reduce(self, vec: Sequence[int]) -> Optional[list[int]]:
        """Reduce vec modulo the lattice; None if it lies in the lattice,
        otherwise the (nonzero) remainder after pivot elimination."""
        vec = list(vec)
        n = self.ambient
        for j in range(n):
            if not vec[j]:
                continue
            k = self._row_with_pivot(j)
            if k is None or vec[j] % self.rows[k][j]:
                return vec
            q = vec[j] // self.rows[k][j]
            row = self.rows[k]
            for jj in range(j, n):
                vec[jj] -= q * row[jj]
        return None

    def coordinates(self, vec: Sequence[int]) -> Optional[list[int]]:
        """Express vec as an integer combination of the current rows."""
        vec = list(vec)
        coords = [0] * len(self.rows)
        for j in range(self.ambient):
            if not vec[j]:
                continue
            k = self._row_with_pivot(j)
            if k is None or vec[j] % self.rows[k][j]:
                return None
            q = vec[j] // self.rows[k][j]
            coords[k] = q
            row = self.rows[k]
            for jj in range(j, self.ambient):
                vec[jj] -= q * row[jj]
        return coords

    def canonical_basis(self) -> list[list[int]]:
        """Hermite form: positive pivots, entries above a pivot in [0, pivot)."""
        rows = [list(r) for r in self.rows]
        pivs = list(self._pivots)
        for i, j in enumerate(pivs):
            if rows[i][j] < 0:
                rows[i] = [-x for x in rows[i]]
        for i in range(len(rows)):
            j = pivs[i]
            d = rows[i][j]
            for k in range(i):
                q = rows[k][j] // d  # floor: leaves remainder in [0, d)
                if q:
                    rows[k] = [a - q * b for a, b in zip(rows[k], rows[i])]
        return rows

    def _row_with_pivot(self, j: int) -> Optional[int]:
        from bisect import bisect_left

        k = bisect_left(self._pivots, j)
        if k < len(self._pivots) and self._pivots[k] == j:
            return k
        return None

    def _insert(self, vec: list[int], j: int) -> None:
        from bisect import bisect_left

        k = bisect_left(self._pivots, j)
        self.rows.insert(k, vec)
        self._pivots.insert(k, j)


@dataclass(frozen=True)
class Lattice:
    """Immutable lattice in Z^ambient_rank with a canonical HNF row basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence[int]) -> bool:
        return IntLattice(self.ambient_rank, self.basis).contains(vec)

    def contains_lattice(self, other: "Lattice") -> bool:
        work = IntLattice(self.ambient_rank, self.basis)
        return all(work.contains(r) for r in other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.basis))


def hnf_basis(rows: Iterable[Sequence[int]], ambient: Optional[int] = None) -> Lattice:
    """Canonical HNF lattice spanned by the given rows.

    The ambient rank is the common row length, or `ambient` for an empty
    iterable of rows.
    """
    rows = [list(r) for r in rows]
    if ambient is None:
        if not rows:
            raise ValueError("ambient rank needed for an empty row set")
        ambient = len(rows[0])
    lat = IntLattice(ambient, rows)
    return Lattice(ambient, tuple(tuple(r) for r in lat.canonical_basis()))


def left_kernel(rows: Sequence[Sequence[int]], width: Optional[int] = None) -> list[list[int]]:
    """Basis of {x : x . M = 0} for the matrix M given by `rows`."""
    m = len(rows)
    if m == 0:
        return []
    if width is None:
        width = len(rows[0])
    # Echelonize [M | I], pivoting only inside the first `width` columns;
    # rows that die there carry kernel coordinates in the tail.
    aug = IntLattice(width + m)
    kernel = IntLattice(m)
    for i, r in enumerate(rows):
        v = list(r) + [0] * m
        v[width + i] = 1
        grew = _add_restricted(aug, v, width)
        if not grew:
            kernel.add(v[width:])
    return kernel.canonical_basis()


def _add_restricted(lat: IntLattice, vec: list[int], width: int) -> bool:
    """IntLattice.add, but a row only earns a pivot in the first `width`
    columns.  Returns False when the leading `width` entries cancel."""
    n = lat.ambient
    for j in range(width):
        if not vec[j]:
            continue
        k = lat._row_with_pivot(j)
        if k is None:
            lat._insert(vec, j)
            return True
        row = lat.rows[k]
        a, b = row[j], vec[j]
        if b % a == 0:
            q = b // a
            for jj in range(j, n):
                vec[jj] -= q * row[jj]
        else:
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            for jj in range(j, n):
                aa, bb = row[jj], vec[jj]
                row[jj] = x * aa + y * bb
                vec[jj] = -bg * aa + ag * bb
    return False


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form: d1 | d2 | ..., zeros trailing.

    The list has min(#rows, #cols) entries, e.g. [[1,0],[0,2]] -> [1, 2].
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    k = min(nr, nc)
    diag: list[int] = []
    t = 0
    while t < k:
        piv = _find_pivot(m, t, nr, nc)
        if piv is None:
            break
        pi, pj = piv
        m[t], m[pi] = m[pi], m[t]
        for r in m:
            r[t], r[pj] = r[pj], r[t]
        while True:
            # clear column t with row ops, then row t with column ops;
            # a nonzero remainder becomes the new, strictly smaller pivot
            restart = False
            for i in range(nr):
                if i == t or not m[i][t]:
                    continue
                q = m[i][t] // m[t][t]
                for j in range(t, nc):
                    m[i][j] -= q * m[t][j]
                if m[i][t]:
                    m[t], m[i] = m[i], m[t]
                    restart = True
                    break
            if restart:
                continue
            for j in range(nc):
                if j == t or not m[t][j]:
                    continue
                q = m[t][j] // m[t][t]
                for i in range(t, nr):
                    m[i][j] -= q * m[i][t]
                if m[t][j]:
                    for i in range(nr):
                        m[i][t], m[i][j] = m[i][j], m[i][t]
                    restart = True
                    break
            if not restart:
                break
        d = abs(m[t][t])
        # enforce divisibility d | every remaining entry
        bad = None
        for i in range(t + 1, nr):
            row = m[i]
            for j in range(t + 1, nc):
                if row[j] % d:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(t, nc):
                m[t][j] += m[bad][j]
            continue
        m[t][t] = d
        diag.append(d)
        t += 1
    diag.extend([0] * (k - t))
    return diag


def _find_pivot(m, t, nr, nc):
    best = None
    best_val = None
    for i in range(t, nr):
        row = m[i]
        for j in range(t, nc):
            v = row[j]
            if v:
                if best_val is None or abs(v) < best_val:
                    best, best_val = (i, j), abs(v)
                    if best_val == 1:
                        return best
    return best


def sub_quotient_invariants(sub: Lattice, sup: Lattice) -> list[int]:
    """Invariant factors of sup/sub: torsion factors (>1) then one 0 per
    free rank.  Raises if sub is not contained in sup."""
    if sub.ambient_rank != sup.ambient_rank:
        raise ValueError("lattices live in different ambient modules")
    work = IntLattice(sup.ambient_rank, sup.basis)
    coords = []
    for r in sub.basis:
        c = work.coordinates(r)
        if c is None:
            raise ValueError("first lattice is not contained in the second")
        coords.append(c)
    return PresentedAb(sup.rank, coords).invariants()


class PresentedAb:
    """Finitely presented abelian group Z^gens / row span(rels)."""

    __slots__ = ("ngens", "rels", "labels", "_inv")

    def __init__(self, ngens: int, rels: Iterable[Sequence[int]] = (),
                 labels: Optional[Sequence[str]] = None):
        self.ngens = ngens
        self.rels = tuple(tuple(r) for r in rels)
        for r in self.rels:
            if len(r) != ngens:
                raise ValueError("relation length does not match generator count")
        self.labels = tuple(labels) if labels is not None else None
        self._inv: Optional[list[int]] = None

    def invariants(self) -> list[int]:
        """Torsion invariant factors (each > 1, divisibility increasing),
        followed by one 0 per free generator."""
        if self._inv is None:
            diag = smith_invariants(self.rels) if self.rels else []
            nonzero = [d for d in diag if d]
            free = self.ngens - len(nonzero)
            self._inv = [d for d in nonzero if d > 1] + [0] * free
        return list(self._inv)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants() if d == 0)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariants() if d]

    def is_trivial(self) -> bool:
        return not self.invariants()

    def order(self) -> Optional[int]:
        """Group order, or None if infinite."""
        inv = self.invariants()
        if any(d == 0 for d in inv):
            return None
        n = 1
        for d in inv:
            n *= d
        return n

    def relation_lattice(self) -> Lattice:
        return hnf_basis(self.rels, self.ngens)

    def __repr__(self) -> str:
        inv = self.invariants()
        if not inv:
            return "PresentedAb(0)"
        parts = [("Z" if d == 0 else f"Z/{d}") for d in inv]
        return "PresentedAb(" + " + ".join(parts) + ")"

    def same_invariants(self, other: "PresentedAb") -> bool:
        return self.invariants() == other.invariants()


def direct_sum_ab(groups: Sequence[PresentedAb]) -> PresentedAb:
    ngens = sum(g.ngens for g in groups)
    rels = []
    offset = 0
    for g in groups:
        for r in g.rels:
            row = [0] * ngens
            row[offset:offset + g.ngens] = list(r)
            rels.append(row)
        offset += g.ngens
    return PresentedAb(ngens, rels)


class AbMap:
    """Homomorphism between finitely presented abelian groups.

    `rows[i]` is the image of the i-th source generator in target
    coordinates, so elements (row vectors) map by x -> x . rows.
    """

    __slots__ = ("source", "target", "rows")

    def __init__(self, source: PresentedAb, target: PresentedAb,
                 rows: Iterable[Sequence[int]], check: bool = True):
        self.source = source
        self.target = target
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != source.ngens:
            raise ValueError("matrix must have one row per source generator")
        for r in self.rows:
            if len(r) != target.ngens:
                raise ValueError("row length does not match target generators")
        if check and not self.is_well_defined():
            raise ValueError("map does not preserve the source relations")

    def is_well_defined(self) -> bool:
        rel = IntLattice(self.target.ngens, self.target.rels)
        for r in self.source.rels:
            if not rel.contains(self.apply(r)):
                return False
        return True

    def apply(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.target.ngens
        for c, row in zip(vec, self.rows):
            if c:
                for j, v in enumerate(row):
                    if v:
                        out[j] += c * v
        return out

    def kernel(self) -> tuple[PresentedAb, list[list[int]]]:
        """Kernel subgroup with generator rows in source coordinates."""
        stacked = [list(r) for r in self.rows] + [list(r) for r in self.target.rels]
        ker = left_kernel(stacked, self.target.ngens)
        lift = [row[: self.source.ngens] for row in ker]
        lat = IntLattice(self.source.ngens, lift)
        basis = lat.canonical_basis()
        rels = []
        for r in self.source.rels:
            c = IntLattice(self.source.ngens, basis).coordinates(r)
            if c is None:
                raise AssertionError("source relations must lie in the kernel lattice")
            rels.append(c)
        return PresentedAb(len(basis), rels), basis

    def image(self) -> tuple[PresentedAb, list[list[int]]]:
        """Image subgroup with generator rows in target coordinates."""
        lat = IntLattice(self.target.ngens)
        for r in self.rows:
            lat.add(r)
        for r in self.target.rels:
            lat.add(r)
        basis = lat.canonical_basis()
        solver = IntLattice(self.target.ngens, basis)
        rels = []
        for r in self.target.rels:
            c = solver.coordinates(r)
            rels.append(c)
        return PresentedAb(len(basis), rels), basis

    def cokernel(self) -> PresentedAb:
        rels = [list(r) for r in self.rows] + [list(r) for r in self.target.rels]
        return PresentedAb(self.target.ngens, rels)

    def compose(self, earlier: "AbMap") -> "AbMap":
        """self after earlier (earlier.target must be self.source)."""
        if earlier.target is not self.source and earlier.target.ngens != self.source.ngens:
            raise ValueError("maps are not composable")
        rows = [self.apply(r) for r in earlier.rows]
        return AbMap(earlier.source, self.target, rows, check=False)

    def is_iso(self) -> bool:
        return self.kernel()[0].is_trivial() and self.cokernel().is_trivial()


@dataclass
class MapCalculus:
    kernel: PresentedAb
    kernel_gens: list[list[int]]
    image: PresentedAb
    image_gens: list[list[int]]
    cokernel: PresentedAb
    is_iso: bool


def map_calculus(f: AbMap) -> MapCalculus:
    ker, kgens = f.kernel()
    img, igens = f.image()
    cok = f.cokernel()
    return MapCalculus(ker, kgens, img, igens, cok,
                       ker.is_trivial() and cok.is_trivial())


class FinitePoset:
    """Finite poset given by elements and a reflexive order relation."""

    def __init__(self, elements: Sequence, leq):
        self.elements = list(elements)
        n = len(self.elements)
        self._idx = {e: i for i, e in enumerate(self.elements)}
        if callable(leq):
            self.leq = [[bool(leq(a, b)) for b in self.elements] for a in self.elements]
        else:
            self.leq = [[bool(x) for x in row] for row in leq]
        self._mu: dict[tuple[int, int], int] = {}
        self._validate()

    def _validate(self) -> None:
        n = len(self.elements)
        L = self.leq
        for i in range(n):
            if not L[i][i]:
                raise ValueError("order relation is not reflexive")
            for j in range(n):
                if i != j and L[i][j] and L[j][i]:
                    raise ValueError("order relation is not antisymmetric")
        for i in range(n):
            for j in range(n):
                if not L[i][j]:
                    continue
                for k in range(n):
                    if L[j][k] and not L[i][k]:
                        raise ValueError("order relation is not transitive")

    def mobius(self, a, b) -> int:
        i, j = self._idx[a], self._idx[b]
        if not self.leq[i][j]:
            raise ValueError("mobius is only defined on intervals a <= b")
        return self._mobius_idx(i, j)

    def _mobius_idx(self, i: int, j: int) -> int:
        if i == j:
            return 1
        key = (i, j)
        if key not in self._mu:
            total = 0
            for k in range(len(self.elements)):
                if self.leq[i][k] and self.leq[k][j] and k != j:
                    total += self._mobius_idx(i, k)
            self._mu[key] = -total
        return self._mu[key]


def poset_mobius(poset: FinitePoset, a, b) -> int:
    return poset.mobius(a, b)
