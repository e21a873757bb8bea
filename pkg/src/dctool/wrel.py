"""Finite multisets and exact weighted matrices over enumerated index spaces.

Objects are small enumerated base sets; the exponential of a base set is the
space of bags (finite multisets) of its atoms, truncated at a maximum size so
every composition sum is finite and exact.  Morphisms are sparse matrices over
a rig.  The operator family mirrors the polynomial model: `d_rel` puts one
element into a bag (weighted by the resulting multiplicity), `dcirc_rel` pulls
one out coefficient-free, `s_rel` pulls one out weighted by the inverse bag
size, and `K_rel`/`J_rel` are the diagonal bag-size scalings built from them.

Every operator shifts bag sizes by a fixed amount (+1, -1 or 0), so equations
between composites of at most two size-shifting operators are exact on the
"safe band" of bags whose size stays at least `margin` below the truncation
bound.  All law checks quantify over that band only.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .rig import Rig

UNIT_POINT = "*"


@dataclass(frozen=True)
class BaseSet:
    atoms: tuple

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be distinct")

    def __iter__(self):
        return iter(self.atoms)


UNIT_BASE = BaseSet((UNIT_POINT,))

# A bag is a sorted tuple of atoms; multiplicity by repetition.
Bag = tuple


def bag(*atoms) -> Bag:
    return tuple(sorted(atoms))


def bag_add(b: Bag, x) -> Bag:
    return tuple(sorted(b + (x,)))


def bag_remove(b: Bag, x) -> Bag:
    out = list(b)
    out.remove(x)
    return tuple(out)


def bag_count(b: Bag, x) -> int:
    return b.count(x)


def enumerate_bags(base: BaseSet, max_size: int):
    out = []
    for n in range(max_size + 1):
        out.extend(tuple(c) for c in combinations_with_replacement(sorted(base.atoms), n))
    return out


@dataclass(frozen=True)
class Truncation:
    """Maximum bag size D plus the margin kept free for size-shifting composites."""

    D: int
    margin: int = 2

    def __post_init__(self):
        if self.margin < 2:
            raise ValueError("margin must be >= 2")
        if self.D < self.margin:
            raise ValueError("truncation bound smaller than margin")

    @property
    def safe_limit(self) -> int:
        return self.D - self.margin


# -- index spaces -----------------------------------------------------------


@dataclass(frozen=True)
class UnitSpace:
    def points(self):
        return [UNIT_POINT]


@dataclass(frozen=True)
class AtomSpace:
    base: BaseSet

    def points(self):
        return list(self.base.atoms)


@dataclass(frozen=True)
class BagSpace:
    base: BaseSet
    max_size: int

    def points(self):
        return enumerate_bags(self.base, self.max_size)


@dataclass(frozen=True)
class PairSpace:
    left: object
    right: object

    def points(self):
        return [(l, r) for l, r in product(self.left.points(), self.right.points())]


def point_weight(space, point) -> int:
    """Largest bag size occurring inside a point of the given space."""
    if isinstance(space, BagSpace):
        return len(point)
    if isinstance(space, PairSpace):
        return max(point_weight(space.left, point[0]), point_weight(space.right, point[1]))
    return 0


def render_point(point) -> str:
    if isinstance(point, tuple) and all(isinstance(a, str) for a in point):
        return "[" + ",".join(point) + "]"
    if isinstance(point, tuple):
        return "(" + ", ".join(render_point(p) for p in point) + ")"
    return str(point)


# -- matrices ---------------------------------------------------------------


class WeightedMatrix:
    """Sparse exact matrix between two enumerated index spaces."""

    __slots__ = ("rig", "row_space", "col_space", "entries")

    def __init__(self, rig: Rig, row_space, col_space, entries=None):
        self.rig = rig
        self.row_space = row_space
        self.col_space = col_space
        canon = {}
        for key, c in (entries or {}).items():
            if not rig.is_zero(c):
                canon[key] = c
        self.entries = canon

    @classmethod
    def zero(cls, rig, row_space, col_space):
        return cls(rig, row_space, col_space)

    @classmethod
    def identity(cls, rig, space):
        return cls(rig, space, space, {(p, p): rig.one for p in space.points()})

    @classmethod
    def from_function(cls, rig, row_space, col_space, fn):
        """Build a 0/1 matrix from a point function rows -> cols."""
        return cls(rig, row_space, col_space, {(p, fn(p)): rig.one for p in row_space.points()})

    def entry(self, r, c):
        return self.entries.get((r, c), self.rig.zero)

    def __add__(self, other):
        self._check_spaces(other)
        rig = self.rig
        entries = dict(self.entries)
        for key, c in other.entries.items():
            entries[key] = rig.add(entries[key], c) if key in entries else c
        return WeightedMatrix(rig, self.row_space, self.col_space, entries)

    def scale(self, c):
        rig = self.rig
        return WeightedMatrix(
            rig, self.row_space, self.col_space, {k: rig.mul(c, v) for k, v in self.entries.items()}
        )

    def transpose(self):
        return WeightedMatrix(
            self.rig, self.col_space, self.row_space, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def _check_spaces(self, other):
        if self.row_space != other.row_space or self.col_space != other.col_space:
            raise ValueError("matrix space mismatch")

    def __eq__(self, other):
        if not isinstance(other, WeightedMatrix):
            return NotImplemented
        if self.row_space != other.row_space or self.col_space != other.col_space:
            return False
        if set(self.entries) != set(other.entries):
            return False
        return all(self.rig.eq(v, other.entries[k]) for k, v in self.entries.items())

    def __hash__(self):
        raise TypeError("WeightedMatrix is not hashable")

    def restrict_safe(self, limit: int):
        """Drop entries whose row or column contains a bag larger than `limit`."""
        entries = {
            (r, c): v
            for (r, c), v in self.entries.items()
            if point_weight(self.row_space, r) <= limit and point_weight(self.col_space, c) <= limit
        }
        return WeightedMatrix(self.rig, self.row_space, self.col_space, entries)

    def first_difference(self, other, limit: int):
        """First safe-band entry where the matrices disagree, or None."""
        if self.row_space != other.row_space or self.col_space != other.col_space:
            raise ValueError("matrix space mismatch")
        a = self.restrict_safe(limit)
        b = other.restrict_safe(limit)
        keys = sorted(set(a.entries) | set(b.entries), key=repr)
        for key in keys:
            va = a.entries.get(key, self.rig.zero)
            vb = b.entries.get(key, self.rig.zero)
            if not self.rig.eq(va, vb):
                r, c = key
                return (
                    f"entry ({render_point(r)}, {render_point(c)}): "
                    f"{self.rig.render(va)} != {self.rig.render(vb)}"
                )
        return None

    def equal_on_safe_band(self, other, limit: int) -> bool:
        return self.first_difference(other, limit) is None


def mat_compose(f: WeightedMatrix, g: WeightedMatrix) -> WeightedMatrix:
    """Matrix product: (f;g)(x, z) = sum_y f(x, y) * g(y, z)."""
    if f.col_space != g.row_space:
        raise ValueError("matrix space mismatch: f.col_space != g.row_space")
    rig = f.rig
    g_by_row = defaultdict(list)
    for (y, z), c in g.entries.items():
        g_by_row[y].append((z, c))
    entries = {}
    for (x, y), a in f.entries.items():
        for z, b in g_by_row.get(y, ()):
            key = (x, z)
            v = rig.mul(a, b)
            entries[key] = rig.add(entries[key], v) if key in entries else v
    return WeightedMatrix(rig, f.row_space, g.col_space, entries)


def tensor(f: WeightedMatrix, g: WeightedMatrix) -> WeightedMatrix:
    """Kronecker product on pair spaces."""
    rig = f.rig
    entries = {}
    for (r1, c1), a in f.entries.items():
        for (r2, c2), b in g.entries.items():
            entries[((r1, r2), (c1, c2))] = rig.mul(a, b)
    return WeightedMatrix(
        rig, PairSpace(f.row_space, g.row_space), PairSpace(f.col_space, g.col_space), entries
    )


def perm_matrix(rig, row_space, col_space, fn) -> WeightedMatrix:
    """Permutation matrix induced by a bijection on points."""
    return WeightedMatrix.from_function(rig, row_space, col_space, fn)


# -- operator matrices ------------------------------------------------------


def spaces(base: BaseSet, trunc: Truncation):
    bags = BagSpace(base, trunc.D)
    atoms = AtomSpace(base)
    return bags, atoms


def d_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Insert one element into a bag, weighted by its multiplicity afterwards."""
    bags, atoms = spaces(base, trunc)
    entries = {}
    for b in bags.points():
        if len(b) >= trunc.D:
            continue
        for x in base.atoms:
            b2 = bag_add(b, x)
            entries[((b, x), b2)] = rig.nat_value(bag_count(b2, x))
    return WeightedMatrix(rig, PairSpace(bags, atoms), bags, entries)


def dcirc_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Remove one element from a bag, coefficient-free."""
    bags, atoms = spaces(base, trunc)
    entries = {}
    for b in bags.points():
        for x in set(b):
            entries[(b, (bag_remove(b, x), x))] = rig.one
    return WeightedMatrix(rig, bags, PairSpace(bags, atoms), entries)


def bang_zero_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Projection onto the empty bag."""
    bags, _ = spaces(base, trunc)
    return WeightedMatrix(rig, bags, bags, {((), ()): rig.one})


def s_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Remove one element, weighted by the inverse of the source bag size."""
    bags, atoms = spaces(base, trunc)
    entries = {}
    for b in bags.points():
        if not b:
            continue
        w = rig.nat_inverse(len(b))
        for x in set(b):
            entries[(b, (bag_remove(b, x), x))] = w
    return WeightedMatrix(rig, bags, PairSpace(bags, atoms), entries)


def K_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Remove-then-insert plus the empty-bag projection; diagonal with weight |b|."""
    return mat_compose(dcirc_rel(base, rig, trunc), d_rel(base, rig, trunc)) + bang_zero_rel(
        base, rig, trunc
    )


def J_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Remove-then-insert plus the identity; diagonal with weight |b| + 1."""
    bags, _ = spaces(base, trunc)
    return mat_compose(dcirc_rel(base, rig, trunc), d_rel(base, rig, trunc)) + WeightedMatrix.identity(
        rig, bags
    )


def K_inv_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags, _ = spaces(base, trunc)
    entries = {}
    for b in bags.points():
        entries[(b, b)] = rig.one if not b else rig.nat_inverse(len(b))
    return WeightedMatrix(rig, bags, bags, entries)


def J_inv_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags, _ = spaces(base, trunc)
    entries = {(b, b): rig.nat_inverse(len(b) + 1) for b in bags.points()}
    return WeightedMatrix(rig, bags, bags, entries)


@dataclass
class Comonoid:
    delta: WeightedMatrix  # bag -> all ordered two-part splits, coefficient-free
    counit: WeightedMatrix  # bag -> unit, supported on the empty bag
    eps: WeightedMatrix  # bag -> atom, supported on singletons


def comonoid_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> Comonoid:
    bags, atoms = spaces(base, trunc)
    unit = UnitSpace()
    delta_entries = {}
    for b in bags.points():
        for b1 in _sub_bags(b):
            b2 = _bag_difference(b, b1)
            delta_entries[(b, (b1, b2))] = rig.one
    delta = WeightedMatrix(rig, bags, PairSpace(bags, bags), delta_entries)
    counit = WeightedMatrix(rig, bags, unit, {((), UNIT_POINT): rig.one})
    eps = WeightedMatrix(rig, bags, atoms, {((x,), x): rig.one for x in base.atoms})
    return Comonoid(delta, counit, eps)


def _sub_bags(b: Bag):
    counts = Counter(b)
    atoms = sorted(counts)
    choices = [range(counts[a] + 1) for a in atoms]
    for pick in product(*choices):
        sub = []
        for a, k in zip(atoms, pick):
            sub.extend([a] * k)
        yield tuple(sorted(sub))


def _bag_difference(b: Bag, sub: Bag) -> Bag:
    counts = Counter(b)
    counts.subtract(Counter(sub))
    out = []
    for a, k in sorted(counts.items()):
        out.extend([a] * k)
    return tuple(out)


# -- unit-object matrices ---------------------------------------------------
# The monoidal unit is a singleton base set; its bag space is, up to notation,
# the natural numbers below the truncation bound.  Strictness identifies
# (unit tensor X) with X, so the unit-level operators live directly on the
# singleton's bag space.


def unit_bags(trunc: Truncation) -> BagSpace:
    return BagSpace(UNIT_BASE, trunc.D)


def _nbag(n: int) -> Bag:
    return (UNIT_POINT,) * n


def d_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Unit-object insertion: (n, m) entry m * delta(n+1, m)."""
    bags = unit_bags(trunc)
    entries = {}
    for n in range(trunc.D):
        entries[(_nbag(n), _nbag(n + 1))] = rig.nat_value(n + 1)
    return WeightedMatrix(rig, bags, bags, entries)


def dcirc_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Unit-object removal: (n, m) entry delta(n, m+1)."""
    bags = unit_bags(trunc)
    entries = {(_nbag(n), _nbag(n - 1)): rig.one for n in range(1, trunc.D + 1)}
    return WeightedMatrix(rig, bags, bags, entries)


def s_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    """Unit-object integration: zero on the empty bag, else (1/n) * delta(n, m+1)."""
    bags = unit_bags(trunc)
    entries = {(_nbag(n), _nbag(n - 1)): rig.nat_inverse(n) for n in range(1, trunc.D + 1)}
    return WeightedMatrix(rig, bags, bags, entries)


def bang_zero_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags = unit_bags(trunc)
    return WeightedMatrix(rig, bags, bags, {((), ()): rig.one})


def K_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    return mat_compose(dcirc_unit_rel(rig, trunc), d_unit_rel(rig, trunc)) + bang_zero_unit_rel(
        rig, trunc
    )


def J_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags = unit_bags(trunc)
    return mat_compose(dcirc_unit_rel(rig, trunc), d_unit_rel(rig, trunc)) + WeightedMatrix.identity(
        rig, bags
    )


def K_inv_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags = unit_bags(trunc)
    entries = {((), ()): rig.one}
    for n in range(1, trunc.D + 1):
        entries[(_nbag(n), _nbag(n))] = rig.nat_inverse(n)
    return WeightedMatrix(rig, bags, bags, entries)


def J_inv_unit_rel(rig: Rig, trunc: Truncation) -> WeightedMatrix:
    bags = unit_bags(trunc)
    entries = {(_nbag(n), _nbag(n)): rig.nat_inverse(n + 1) for n in range(trunc.D + 1)}
    return WeightedMatrix(rig, bags, bags, entries)


@dataclass
class UnitMonoidal:
    m_R: WeightedMatrix  # unit point -> every unit bag, all entries one
    m_RA: WeightedMatrix  # (unit bag of size n, bag b) -> b, gated on n = |b|


def m_unit_rel(base: BaseSet, rig: Rig, trunc: Truncation) -> UnitMonoidal:
    ubags = unit_bags(trunc)
    bags = BagSpace(base, trunc.D)
    m_R = WeightedMatrix(
        rig, UnitSpace(), ubags, {(UNIT_POINT, _nbag(n)): rig.one for n in range(trunc.D + 1)}
    )
    entries = {((_nbag(len(b)), b), b): rig.one for b in bags.points()}
    m_RA = WeightedMatrix(rig, PairSpace(ubags, bags), bags, entries)
    return UnitMonoidal(m_R, m_RA)


# -- bag splitting over a disjoint union ------------------------------------


def seely_rel(base_x: BaseSet, base_y: BaseSet, rig: Rig, trunc: Truncation):
    """Split a bag over a disjoint union into its two parts.

    Returns (chi, chi_inv); chi is a permutation matrix and chi_inv its
    transpose.
    """
    if set(base_x.atoms) & set(base_y.atoms):
        raise ValueError("base sets must be disjoint")
    combined = BaseSet(tuple(sorted(base_x.atoms + base_y.atoms)))
    bags_xy = BagSpace(combined, trunc.D)
    bags_x = BagSpace(base_x, trunc.D)
    bags_y = BagSpace(base_y, trunc.D)
    xset = set(base_x.atoms)

    def split(b):
        left = tuple(a for a in b if a in xset)
        right = tuple(a for a in b if a not in xset)
        return (left, right)

    entries = {(b, split(b)): rig.one for b in bags_xy.points()}
    chi = WeightedMatrix(rig, bags_xy, PairSpace(bags_x, bags_y), entries)
    return chi, chi.transpose()


# -- reconstruction from the unit object ------------------------------------


def unit_reconstruct(base: BaseSet, rig: Rig, trunc: Truncation) -> dict:
    """Build K-inverse, J-inverse, and the integral from unit-object data only.

    Uses the unit integration matrix, unit insertion, general removal, and the
    unit monoidal maps; returns the three composites for comparison against
    the directly defined operators.
    """
    bags = BagSpace(base, trunc.D)
    atoms = AtomSpace(base)
    ubags = unit_bags(trunc)
    um = m_unit_rel(base, rig, trunc)
    m_RR = m_unit_rel(UNIT_BASE, rig, trunc).m_RA  # ((n, m), k) -> gated n = m = k
    s_u = s_unit_rel(rig, trunc)
    d_u = d_unit_rel(rig, trunc)
    dc = dcirc_rel(base, rig, trunc)
    id_bags = WeightedMatrix.identity(rig, bags)
    id_atoms = WeightedMatrix.identity(rig, atoms)

    # J-inverse: spread over unit sizes, integrate the unit factor, regate.
    spread = WeightedMatrix(
        rig,
        bags,
        PairSpace(ubags, bags),
        {(b, (_nbag(n), b)): rig.one for b in bags.points() for n in range(trunc.D + 1)},
    )
    j_inv = mat_compose(mat_compose(spread, tensor(s_u, id_bags)), um.m_RA)

    # Integral: spread, integrate the unit factor while removing an element,
    # then regate the unit size against the remaining bag.
    mid = mat_compose(spread, tensor(s_u, dc))
    regate = WeightedMatrix(
        rig,
        PairSpace(ubags, PairSpace(bags, atoms)),
        PairSpace(bags, atoms),
        {
            ((_nbag(len(b)), (b, x)), (b, x)): rig.one
            for b in bags.points()
            for x in base.atoms
        },
    )
    s_matrix = mat_compose(mid, regate)

    # K-inverse: double spread, integrate both unit copies, merge the two unit
    # sizes, differentiate the unit factor, regate; plus the empty-bag block.
    spread2 = WeightedMatrix(
        rig,
        bags,
        PairSpace(PairSpace(ubags, ubags), bags),
        {
            (b, ((_nbag(n), _nbag(m)), b)): rig.one
            for b in bags.points()
            for n in range(trunc.D + 1)
            for m in range(trunc.D + 1)
        },
    )
    chain = mat_compose(spread2, tensor(tensor(s_u, s_u), id_bags))
    chain = mat_compose(chain, tensor(m_RR, id_bags))
    chain = mat_compose(chain, tensor(d_u, id_bags))
    k_inv = mat_compose(chain, um.m_RA) + bang_zero_rel(base, rig, trunc)

    return {"K_inv": k_inv, "J_inv": j_inv, "s": s_matrix}
