"""Root systems, Weyl vectors, Coxeter numbers and lattices.

Everything is exact: roots are tuples of :class:`~fractions.Fraction` in the
standard ambient realizations (``B_n`` roots are ``±e_i±e_j, ±e_i`` and so on;
``E_6 ⊂ E_7 ⊂ E_8`` sit inside the even-coordinate ``E_8`` in ``R^8``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, lcm, prod
from typing import Iterable, Sequence

from . import exact as ex
from .exact import Vec

FAMILIES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")

_EXCEPTIONAL_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_EXCEPTIONAL_WEYL_ORDER = {"E6": 51840, "E7": 2903040, "E8": 696729600,
                           "F4": 1152, "G2": 12}


# -----------------------------------------------------------------------------
# Lattices
# -----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lattice:
    """A lattice of rational vectors, stored by its canonical (Hermite) basis.

    Use :meth:`from_generators`; the basis need not span the ambient space.
    """

    ambient_dim: int
    basis: tuple[Vec, ...]
    denominator: int

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], ambient_dim: int | None = None) -> "Lattice":
        gens = [ex.vec(g) for g in generators]
        if ambient_dim is None:
            if not gens:
                raise ValueError("ambient_dim is required for an empty generating set")
            ambient_dim = len(gens[0])
        if any(len(g) != ambient_dim for g in gens):
            raise ValueError("generators have inconsistent dimensions")
        d = ex.common_denominator(gens)
        rows = [[int(x * d) for x in g] for g in gens]
        h, _ = ex.hermite(rows, ambient_dim) if rows else ([], [])
        basis = tuple(tuple(Fraction(x, d) for x in row) for row in h)
        return cls(ambient_dim, basis, ex.common_denominator(basis))

    @classmethod
    def integer(cls, n: int, scale=1) -> "Lattice":
        """``scale * Z^n``."""
        return cls.from_generators([ex.scale(scale, ex.unit(n, i)) for i in range(n)], n)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> tuple[int, ...] | None:
        """Integer coordinates of ``v`` in :attr:`basis`, or ``None`` if ``v`` is not in the lattice."""
        v = ex.vec(v)
        if len(v) != self.ambient_dim:
            raise ValueError(f"dimension mismatch: lattice lives in R^{self.ambient_dim}, got {len(v)}")
        # scale so that both the basis and v become integral
        d = lcm(self.denominator, ex.common_denominator([v]))
        rows = [[int(x * d) for x in b] for b in self.basis]
        # the stored basis is already in echelon form, so reduce directly
        pivots = [next(i for i, x in enumerate(r) if x) for r in rows]
        rem, coeffs = ex.reduce_against(rows, pivots, [int(x * d) for x in v])
        if any(rem):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def scaled(self, c) -> "Lattice":
        return Lattice.from_generators([ex.scale(c, b) for b in self.basis], self.ambient_dim)

    def vector(self, coords: Sequence[int]) -> Vec:
        out = ex.zero(self.ambient_dim)
        for c, b in zip(coords, self.basis):
            out = ex.axpy(c, b, out)
        return out

    def intersect_span(self, span: Sequence[Vec]) -> "Lattice":
        """The sublattice ``self ∩ R<span>``."""
        n = self.ambient_dim
        if not self.basis:
            return self
        # component of each basis vector orthogonal to the span must vanish
        perp = [ex.sub(b, ex.project(b, list(span))) for b in self.basis]
        d = ex.common_denominator(perp)
        m = [[int(x * d) for x in p] for p in perp]
        k = len(self.basis)
        aug = [row + [int(i == j) for j in range(k)] for i, row in enumerate(m)]
        h, _ = ex.hermite(aug, n + k)
        kernel = [row[n:] for row in h if not any(row[:n])]
        return Lattice.from_generators([self.vector(c) for c in kernel], n)

    def to_dict(self) -> dict:
        return {"type": "lattice", "ambient_dim": self.ambient_dim,
                "basis": [ex.fmt_vec(b) for b in self.basis],
                "denominator": self.denominator}

    @classmethod
    def from_dict(cls, data: dict) -> "Lattice":
        return cls.from_generators([ex.parse_vec(b) for b in data["basis"]], data["ambient_dim"])


def lattice_contains(lattice: Lattice, v: Sequence) -> bool:
    """Exact membership test; raises ``ValueError`` on a dimension mismatch."""
    return lattice.contains(v)


@dataclass(frozen=True)
class QuotientGroup:
    """Finite abelian group ``sup/sub`` with reduced coset representatives."""

    order: int
    representatives: tuple[Vec, ...]
    table: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]
    _sup_basis: tuple[Vec, ...] = field(repr=False, default=())
    _sub_rows: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
        return k

    @property
    def is_cyclic(self) -> bool:
        return any(self.element_order(i) == self.order for i in range(self.order))


def quotient_group(sup: Lattice, sub: Lattice) -> QuotientGroup:
    """The quotient ``sup/sub`` for ``sub ⊆ sup`` of equal rank."""
    if sup.ambient_dim != sub.ambient_dim:
        raise ValueError("dimension mismatch")
    coords = []
    for b in sub.basis:
        c = sup.coordinates(b)
        if c is None:
            raise ValueError("sub is not contained in sup")
        coords.append(c)
    if sub.rank != sup.rank:
        raise ValueError("sub and sup do not span the same space")
    h, piv = ex.hermite(coords, sup.rank) if coords else ([], [])
    diag = tuple(h[i][piv[i]] for i in range(len(h)))

    def reduce(c):
        rem, _ = ex.reduce_against(h, piv, c)
        return tuple(rem)

    boxes = [()]
    for d in diag:
        boxes = [b + (x,) for b in boxes for x in range(d)]
    index = {b: i for i, b in enumerate(boxes)}
    table = tuple(
        tuple(index[reduce([x + y for x, y in zip(a, b)])] for b in boxes) for a in boxes
    )
    reps = tuple(sup.vector(b) for b in boxes)
    return QuotientGroup(len(boxes), reps, table, diag, sup.basis, tuple(h))


# -----------------------------------------------------------------------------
# Root data
# -----------------------------------------------------------------------------


def _standard_simple_roots(family: str, rank: int) -> list[Vec]:
    e = ex.unit
    h = Fraction(1, 2)
    if family == "A":
        n = rank + 1
        return [ex.sub(e(n, i), e(n, i + 1)) for i in range(rank)]
    if family in ("B", "C", "D"):
        n = rank
        out = [ex.sub(e(n, i), e(n, i + 1)) for i in range(n - 1)]
        if family == "B":
            out.append(e(n, n - 1))
        elif family == "C":
            out.append(ex.scale(2, e(n, n - 1)))
        else:
            out.append(ex.add(e(n, n - 2), e(n, n - 1)))
        return out
    if family in ("E6", "E7", "E8"):
        e8 = [(h, -h, -h, -h, -h, -h, -h, h), ex.add(e(8, 0), e(8, 1))]
        e8 += [ex.sub(e(8, i), e(8, i - 1)) for i in range(1, 7)]
        return e8[:rank]
    if family == "F4":
        return [ex.sub(e(4, 1), e(4, 2)), ex.sub(e(4, 2), e(4, 3)), e(4, 3), (h, -h, -h, -h)]
    if family == "G2":
        return [ex.vec((1, -1, 0)), ex.vec((-2, 1, 1))]
    raise ValueError(f"unknown family {family!r}")


def _check_family(family: str, rank: int) -> None:
    if family in _EXCEPTIONAL_RANK:
        if rank != _EXCEPTIONAL_RANK[family]:
            raise ValueError(f"{family} has rank {_EXCEPTIONAL_RANK[family]}, not {rank}")
        return
    minimum = {"A": 1, "B": 1, "C": 1, "D": 3}.get(family)
    if minimum is None:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if rank < minimum:
        raise ValueError(f"{family}{rank} is not a valid root system (rank must be >= {minimum})")


def classify(cartan: Sequence[Sequence[int]], lengths: Sequence[Fraction], npos: int) -> str:
    """Cartan type (e.g. ``"B3"``) of an irreducible Cartan matrix."""
    r = len(cartan)
    bond = max((cartan[i][j] * cartan[j][i] for i in range(r) for j in range(r) if i != j), default=0)
    if r == 1:
        return "A1"
    if bond == 3:
        return "G2"
    if bond == 1:
        if npos == r * (r + 1) // 2:
            return f"A{r}"
        if npos == r * (r - 1):
            return f"D{r}"
        return {36: "E6", 63: "E7", 120: "E8"}[npos]
    if r == 4 and npos == 24:
        return "F4"
    if r == 2:
        return "B2"
    longest = max(lengths)
    nlong = sum(1 for x in lengths if x == longest)
    return f"B{r}" if nlong == r - 1 else f"C{r}"


def weyl_group_order(cartan_type: str) -> int:
    if cartan_type in _EXCEPTIONAL_WEYL_ORDER:
        return _EXCEPTIONAL_WEYL_ORDER[cartan_type]
    fam, r = cartan_type[0], int(cartan_type[1:])
    if fam == "A":
        return factorial(r + 1)
    if fam in "BC":
        return 2 ** r * factorial(r)
    if fam == "D":
        return 2 ** (r - 1) * factorial(r)
    raise ValueError(cartan_type)


@dataclass(frozen=True)
class Component:
    """An irreducible factor: its Cartan type and the indices of its simple roots."""

    cartan_type: str
    indices: tuple[int, ...]
    coxeter_number: int
    highest_root: Vec


@dataclass(frozen=True, eq=False)
class RootDatum:
    """A (possibly reducible) crystallographic root system with its standard data.

    ``cartan_matrix[i][j] = 2<a_i, a_j>/<a_j, a_j>``.  For a reducible system
    ``highest_root`` is ``None``; per-factor data lives in ``components``.
    """

    family: str
    rank: int
    ambient_dim: int
    simple_roots: tuple[Vec, ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Vec, ...]
    positive_root_coeffs: tuple[tuple[int, ...], ...]
    weyl_vector: Vec
    highest_root: Vec | None
    coxeter_number: int
    components: tuple[Component, ...]

    @classmethod
    def from_simple_roots(cls, simple_roots: Sequence[Sequence], ambient_dim: int | None = None) -> "RootDatum":
        simple = tuple(ex.vec(a) for a in simple_roots)
        if ambient_dim is None:
            if not simple:
                raise ValueError("ambient_dim is required for an empty root system")
            ambient_dim = len(simple[0])
        r = len(simple)
        cartan = tuple(
            tuple(int(2 * ex.dot(a, b) / ex.dot(b, b)) for b in simple) for a in simple
        )
        for i in range(r):
            for j in range(r):
                if Fraction(2 * ex.dot(simple[i], simple[j]), ex.dot(simple[j], simple[j])) != cartan[i][j]:
                    raise ValueError("simple roots do not form a crystallographic system")

        # all roots via simple reflections in simple-root coordinates
        start = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        seen = set(start)
        frontier = list(start)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(r):
                    pair = sum(beta[j] * cartan[j][i] for j in range(r))
                    if pair:
                        img = tuple(b - pair * (j == i) for j, b in enumerate(beta))
                        if img not in seen:
                            seen.add(img)
                            nxt.append(img)
            frontier = nxt
        pos = sorted((c for c in seen if all(x >= 0 for x in c)), key=lambda c: (sum(c), c))
        if 2 * len(pos) != len(seen):
            raise ValueError("simple roots are not a base of a root system")

        def to_vec(c):
            out = ex.zero(ambient_dim)
            for ci, a in zip(c, simple):
                if ci:
                    out = ex.axpy(ci, a, out)
            return out

        pos_vecs = tuple(to_vec(c) for c in pos)
        weyl = ex.scale(Fraction(1, 2), tuple(map(sum, zip(*pos_vecs)))) if pos_vecs else ex.zero(ambient_dim)

        # connected components of the Dynkin diagram
        comps = []
        unseen = set(range(r))
        while unseen:
            stack = [min(unseen)]
            block = set()
            while stack:
                i = stack.pop()
                if i in block:
                    continue
                block.add(i)
                stack.extend(j for j in range(r) if j not in block and cartan[i][j] != 0)
            unseen -= block
            idx = tuple(sorted(block))
            sub_cartan = [[cartan[i][j] for j in idx] for i in idx]
            comp_pos = [c for c in pos if all(c[j] == 0 for j in range(r) if j not in block)]
            ctype = classify(sub_cartan, [ex.norm2(simple[i]) for i in idx], len(comp_pos))
            top = max(comp_pos, key=lambda c: (sum(c), c))
            comps.append(Component(ctype, idx, 2 * len(comp_pos) // len(idx), to_vec(top)))
        comps.sort(key=lambda c: c.indices)

        family = "x".join(c.cartan_type for c in comps) if comps else "T"
        highest = comps[0].highest_root if len(comps) == 1 else None
        cox = max((c.coxeter_number for c in comps), default=1)
        return cls(family, r, ambient_dim, simple, cartan, pos_vecs, tuple(pos), weyl,
                   highest, cox, tuple(comps))

    # -- derived data ------------------------------------------------------------

    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def roots(self) -> tuple[Vec, ...]:
        return self.positive_roots + tuple(ex.neg(a) for a in self.positive_roots)

    @cached_property
    def simple_coroots(self) -> tuple[Vec, ...]:
        return tuple(ex.coroot(a) for a in self.simple_roots)

    @cached_property
    def weyl_group_order(self) -> int:
        return prod(weyl_group_order(c.cartan_type) for c in self.components)

    @cached_property
    def root_lattice(self) -> Lattice:
        return Lattice.from_generators(self.simple_roots, self.ambient_dim)

    @cached_property
    def fundamental_weights(self) -> tuple[Vec, ...]:
        inv = ex.inverse(self.cartan_matrix)
        out = []
        for i in range(self.rank):
            w = ex.zero(self.ambient_dim)
            for k in range(self.rank):
                w = ex.axpy(inv[i][k], self.simple_roots[k], w)
            out.append(w)
        return tuple(out)

    @cached_property
    def weight_lattice(self) -> Lattice:
        """Weights inside the span of the roots."""
        return Lattice.from_generators(self.fundamental_weights, self.ambient_dim)

    def project_to_root_span(self, v: Sequence) -> Vec:
        return ex.project(ex.vec(v), list(self.simple_roots))

    def component_of(self, simple_index: int) -> int:
        for k, c in enumerate(self.components):
            if simple_index in c.indices:
                return k
        raise IndexError(simple_index)

    def to_dict(self) -> dict:
        return {"type": "root_datum", "family": self.family, "rank": self.rank,
                "ambient_dim": self.ambient_dim,
                "simple_roots": [ex.fmt_vec(a) for a in self.simple_roots],
                "cartan_matrix": [list(r) for r in self.cartan_matrix],
                "weyl_vector": ex.fmt_vec(self.weyl_vector),
                "highest_root": None if self.highest_root is None else ex.fmt_vec(self.highest_root),
                "coxeter_number": self.coxeter_number,
                "num_positive_roots": len(self.positive_roots)}

    @classmethod
    def from_dict(cls, data: dict) -> "RootDatum":
        return cls.from_simple_roots([ex.parse_vec(a) for a in data["simple_roots"]], data["ambient_dim"])


_FAMILY_RE = re.compile(r"^(E6|E7|E8|F4|G2|[ABCD])(\d*)$")


def build_root_datum(family: str, rank: int | None = None) -> RootDatum:
    """Standard realization of a simple type, or of a product such as ``"A1xG2"``.

    ``family`` is a letter plus ``rank`` (``("B", 3)``), a full label (``"B3"``,
    ``"E8"``), or ``"x"``-separated labels for a product.
    """
    if "x" in family:
        if rank is not None:
            raise ValueError("rank must be omitted for a product type")
        return product(*(build_root_datum(f) for f in family.split("x")))
    m = _FAMILY_RE.match(family)
    if m is None:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    fam, digits = m.groups()
    if fam in _EXCEPTIONAL_RANK:
        rank = _EXCEPTIONAL_RANK[fam] if rank is None else rank
    elif digits:
        if rank is not None and rank != int(digits):
            raise ValueError(f"conflicting ranks in {family!r} and {rank}")
        rank = int(digits)
    elif rank is None:
        raise ValueError(f"family {fam} requires a rank")
    _check_family(fam, rank)
    rd = RootDatum.from_simple_roots(_standard_simple_roots(fam, rank))
    if fam in ("B", "C") and rank == 1:
        # B1 and C1 are A1 realized on the torus coordinate
        pass
    return rd


def product(*factors: RootDatum) -> RootDatum:
    """Orthogonal direct sum of root data."""
    dim = sum(f.ambient_dim for f in factors)
    simple = []
    offset = 0
    for f in factors:
        for a in f.simple_roots:
            simple.append(ex.zero(offset) + a + ex.zero(dim - offset - f.ambient_dim))
        offset += f.ambient_dim
    return RootDatum.from_simple_roots(simple, dim)


def torus(r: int) -> RootDatum:
    """The empty root system in ``R^r`` (the Weyl group of ``U(1)^r``)."""
    return RootDatum.from_simple_roots([], r)


def is_subweight_lattice(lattice: Lattice, rd: RootDatum) -> bool:
    """True iff ``lattice`` contains the roots and pairs integrally with the coroots.

    Simple roots and simple coroots suffice: the roots are integer combinations
    of the simple roots, and likewise for coroots.
    """
    if lattice.ambient_dim != rd.ambient_dim:
        raise ValueError("dimension mismatch between lattice and root datum")
    if not all(lattice.contains(a) for a in rd.simple_roots):
        return False
    return all(ex.dot(b, c).denominator == 1 for b in lattice.basis for c in rd.simple_coroots)


def wall_gradients(rd: RootDatum, translations: Lattice | None = None) -> tuple[Vec, ...]:
    """Gradients of the reflecting walls of ``W ⋉ translations``, one per positive root.

    The affine reflections with linear part ``s_α`` translate by multiples of the
    generator ``τ_α`` of ``translations ∩ Rα``; their walls are ``<x, g_α> ∈ Z``
    with ``g_α = 2α/<τ_α, α>``.  For the root lattice this is the coroot ``α^∨``.
    """
    if translations is None or translations == rd.root_lattice:
        return tuple(ex.coroot(a) for a in rd.positive_roots)
    out = []
    for a in rd.positive_roots:
        line = translations.intersect_span([a])
        if line.rank != 1:
            raise ValueError("translation lattice meets a root line trivially; W ⋉ L has no such reflection")
        b = line.basis[0]
        c = abs(ex.dot(b, a) / ex.norm2(a))
        out.append(ex.scale(Fraction(2) / (c * ex.norm2(a)), a))
    return tuple(out)


# -----------------------------------------------------------------------------
# Group specifications
# -----------------------------------------------------------------------------

TWIST_KINDS = ("U", "H", "A2_odd", "A2_even", "D2", "E6_2", "D4_3")


@dataclass(frozen=True)
class Twist:
    """A component ``ⁿX``: the kind of outer twist and the cycle length ``n``.

    ``U`` is the cyclotomic torus component, ``H`` a cyclic shift of copies of a
    simple group, the rest the twisted shifts.  ``m`` is the rank parameter of
    ``A^(2)_{2m-1}``, ``A^(2)_{2m}`` or ``D^(2)_m``.
    """

    kind: str
    n: int = 1
    m: int | None = None

    def __post_init__(self):
        if self.kind not in TWIST_KINDS:
            raise ValueError(f"unknown twist {self.kind!r}; expected one of {', '.join(TWIST_KINDS)}")
        if self.n < 1:
            raise ValueError("cycle length must be positive")
        if self.kind in ("A2_odd", "A2_even", "D2"):
            low = 2 if self.kind == "D2" else 1
            if self.m is None or self.m < low:
                raise ValueError(f"{self.kind} needs a rank parameter m >= {low}")

    @property
    def order(self) -> int:
        """Order of the outer automorphism (2 or 3)."""
        return 3 if self.kind == "D4_3" else 2

    @property
    def affine_twisted(self) -> bool:
        """Whether the effective Weyl vector is read off the folded diagram."""
        return self.kind in ("E6_2", "D4_3")

    @property
    def threshold_factor(self) -> int:
        """``p`` is reduced by ``gcd(p, factor * n)`` in the independence threshold."""
        return {"A2_odd": 2, "A2_even": 2, "E6_2": 2, "D4_3": 3}.get(self.kind, 1)

    def label(self) -> str:
        names = {"U": "U", "H": "H", "A2_odd": f"A^(2)_{2 * (self.m or 0) - 1}", "A2_even": f"A^(2)_{2 * (self.m or 0)}",
                 "D2": f"D^(2)_{self.m}", "E6_2": "E^(2)_6", "D4_3": "D^(3)_4"}
        prefix = "" if self.n == 1 else str(self.n)
        return prefix + names[self.kind]


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """A compact group (or twisted component) described by ``(W, Λ^G)``.

    ``translations`` is the lattice ``Λ_a`` with ``W ⋉ Λ_a`` affine; it defaults
    to the root lattice.  ``Λ^G`` must contain it and pair integrally with the
    wall gradients (for the root lattice: the usual subweight condition).
    """

    root_datum: RootDatum
    lattice: Lattice
    label: str
    twist: Twist | None = None
    translations: Lattice | None = None

    def __post_init__(self):
        if self.translations is None:
            object.__setattr__(self, "translations", self.root_datum.root_lattice)
            if not is_subweight_lattice(self.lattice, self.root_datum):
                raise ValueError(f"{self.label}: lattice is not a subweight lattice of {self.root_datum.family}")
            return
        if not self.lattice.contains_lattice(self.translations):
            raise ValueError(f"{self.label}: lattice does not contain the translation lattice")
        if not all(ex.dot(b, g).denominator == 1 for b in self.lattice.basis for g in self.gradients):
            raise ValueError(f"{self.label}: lattice does not pair integrally with the wall gradients")

    @cached_property
    def gradients(self) -> tuple[Vec, ...]:
        """Wall gradients of ``W ⋉ Λ_a``, aligned with ``root_datum.positive_roots``."""
        return wall_gradients(self.root_datum, self.translations)

    @cached_property
    def weyl_vector(self) -> Vec:
        if self.twist is not None and self.twist.affine_twisted:
            return twisted_weyl_vector(self.root_datum)
        return self.root_datum.weyl_vector

    @cached_property
    def lattice0(self) -> Lattice:
        """``Λ_0 = Λ ∩ R Λ_a``."""
        return self.lattice.intersect_span(self.root_datum.simple_roots)

    @property
    def root_lattice(self) -> Lattice:
        return self.translations

    def to_dict(self) -> dict:
        return {"type": "group_spec", "label": self.label,
                "root_datum": self.root_datum.to_dict(), "lattice": self.lattice.to_dict(),
                "translations": self.translations.to_dict(),
                "twist": None if self.twist is None else
                {"kind": self.twist.kind, "n": self.twist.n, "m": self.twist.m}}

    @classmethod
    def from_dict(cls, data: dict) -> "GroupSpec":
        tw = data.get("twist")
        rd = RootDatum.from_dict(data["root_datum"])
        trans = Lattice.from_dict(data["translations"]) if data.get("translations") else None
        if trans is not None and trans == rd.root_lattice:
            trans = None
        return cls(rd, Lattice.from_dict(data["lattice"]), data["label"],
                   None if tw is None else Twist(**tw), trans)


def twist_scale(rd: RootDatum) -> Fraction:
    """``2/|long root|^2``: rescales roots so long roots have squared length 2."""
    return Fraction(2) / max(ex.norm2(a) for a in rd.simple_roots)


def highest_short_root(rd: RootDatum) -> Vec:
    """The short positive root of greatest height (in the simple-root basis)."""
    short = min(ex.norm2(a) for a in rd.simple_roots)
    cands = [(sum(c), a) for a, c in zip(rd.positive_roots, rd.positive_root_coeffs)
             if ex.norm2(a) == short]
    return max(cands, key=lambda t: t[0])[1]


def twisted_weyl_vector(rd: RootDatum) -> Vec:
    """Vector pairing to 1 with every length-normalized simple root."""
    k = twist_scale(rd)
    gram = [[k * ex.dot(a, b) for a in rd.simple_roots] for b in rd.simple_roots]
    c = ex.solve(gram, [1] * rd.rank)
    out = ex.zero(rd.ambient_dim)
    for ci, a in zip(c, rd.simple_roots):
        out = ex.axpy(ci, a, out)
    return out


def twisted_translation_lattice(rd: RootDatum) -> Lattice:
    """Translations of the folded affine Weyl group whose extra wall is ``<x, κθ_s> = 1``.

    The extra reflection translates by ``(2/(κ|θ_s|^2)) θ_s``; its ``W``-orbit
    spans that multiple of the short-root lattice.
    """
    theta = highest_short_root(rd)
    s = Fraction(2) / (twist_scale(rd) * ex.norm2(theta))
    short = [a for a in rd.positive_roots if ex.norm2(a) == ex.norm2(theta)]
    return Lattice.from_generators([ex.scale(s, a) for a in short], rd.ambient_dim)


def dual_lattice(vectors: Sequence[Vec], ambient_dim: int) -> Lattice:
    """Vectors in the span of ``vectors`` pairing integrally with each of them."""
    span = [ex.vec(v) for v in vectors]
    gram = [[ex.dot(a, b) for b in span] for a in span]
    inv = ex.inverse(gram)
    gens = []
    for row in inv:
        w = ex.zero(ambient_dim)
        for c, a in zip(row, span):
            w = ex.axpy(c, a, w)
        gens.append(w)
    return Lattice.from_generators(gens, ambient_dim)


def group_spec(family: str, rank: int | None = None, form: str = "adjoint",
               lattice: Lattice | None = None) -> GroupSpec:
    """Adjoint (``Λ = Λ_a``), simply connected (``Λ = Λ̃``) or custom form of a type."""
    rd = build_root_datum(family, rank)
    if form == "adjoint":
        lat, tag = rd.root_lattice, "adjoint"
    elif form in ("sc", "simply-connected"):
        lat, tag = rd.weight_lattice, "simply-connected"
    elif form in ("custom", "custom-lattice-file"):
        if lattice is None:
            raise ValueError("custom form needs a lattice")
        lat, tag = lattice, "custom"
    else:
        raise ValueError(f"unknown form {form!r}")
    return GroupSpec(rd, lat, f"{rd.family} {tag}")


def unitary_spec(n: int) -> GroupSpec:
    """``U(n)``: type ``A_{n-1}`` on ``R^n`` with character lattice ``Z^n``."""
    rd = build_root_datum("A", n - 1) if n > 1 else torus(1)
    return GroupSpec(rd, Lattice.integer(n), f"U({n})")


def su_spec(n: int) -> GroupSpec:
    """``SU(n)``: simply connected ``A_{n-1}``."""
    if n < 2:
        raise ValueError("SU(n) needs n >= 2")
    rd = build_root_datum("A", n - 1)
    return GroupSpec(rd, rd.weight_lattice, f"SU({n})")


def torus_spec(r: int) -> GroupSpec:
    return GroupSpec(torus(r), Lattice.integer(r), f"U(1)^{r}")


def twisted_spec(kind: str, m: int | None = None, n: int = 1, form: str = "adjoint") -> GroupSpec:
    """Effective ``(W, Λ^G)`` pair of the twisted component ``ⁿX``.

    The cycle length ``n`` is recorded on the twist; the congruential data of
    ``(ⁿX)^p`` is that of ``(¹X)^{p/gcd(n,p)}``.  ``X^⊥`` is read as the dual
    of the wall gradients of ``W ⋉ Λ_a``, with ``Λ_a`` the adjoint lattice.
    """
    twist = Twist(kind, n, m)
    half = Fraction(1, 2)
    if kind == "U":
        return GroupSpec(torus(1), Lattice.integer(1), twist.label(), twist)
    if kind == "H":
        raise ValueError("an H component has the data of its simple factor; use group_spec with the cycle length")
    if kind in ("E6_2", "D4_3"):
        rd = build_root_datum("F4" if kind == "E6_2" else "G2")
        trans = twisted_translation_lattice(rd)
    elif kind == "A2_odd":
        rd = build_root_datum("B", m)
        # (1/2) D_m; for m = 1, D_1 = 2Z
        gens = [ex.scale(half, ex.add(ex.unit(m, i), ex.unit(m, j)))
                for i in range(m) for j in range(m) if i != j]
        gens += [ex.unit(m, i) for i in range(m)]
        trans = Lattice.from_generators(gens, m)
    elif kind == "A2_even":
        rd = build_root_datum("C", m)
        trans = Lattice.integer(m, half)
    else:
        rd = build_root_datum("C", m - 1)
        trans = Lattice.integer(m - 1)
    if form == "adjoint":
        lat = trans
    elif form in ("sc", "simply-connected"):
        if kind == "A2_odd":
            lat = Lattice.integer(m, half)
        elif kind == "A2_even":
            lat = trans
        else:
            lat = dual_lattice(simple_gradients(rd, trans), rd.ambient_dim)
    else:
        raise ValueError(f"unknown form {form!r} for a twisted component")
    return GroupSpec(rd, lat, twist.label(), twist, trans)


def simple_gradients(rd: RootDatum, trans: Lattice | None = None) -> list[Vec]:
    grads = wall_gradients(rd, trans)
    index = {c: i for i, c in enumerate(rd.positive_root_coeffs)}
    return [grads[index[tuple(int(i == j) for j in range(rd.rank))]] for i in range(rd.rank)]
