"""Congruential subgroups ``W^{v+Λ}``, the groups ``W^(p)`` and the power conditions.

``W^{v+Λ} = {w ∈ W : w(v) - v ∈ Λ}``.  It is computed at the alcove
representative ``v_bar``: the walls through ``v_bar`` give the reflection part
and the alcove symmetries from ``Λ_0/Λ_a`` fixing ``v_bar`` give the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import exact as ex
from .affine import (AlcoveReduction, AffineSystem, DiagramAutomorphism, diagram_automorphisms,
                     reduce_to_alcove, system_for)
from .exact import Mat, Vec
from .rootsys import GroupSpec, Lattice, RootDatum, Twist, twist_scale


@dataclass(frozen=True, eq=False)
class CongruentialGroup:
    """``W^{v+Λ}`` as a reflection subgroup extended by alcove symmetries.

    ``weyl_part`` lives in the original frame of ``v``; ``walls`` are the affine
    nodes through ``v_bar`` and ``automorphism_matrices`` are the linear parts
    of the symmetries conjugated back to that frame.
    """

    weyl_part: RootDatum
    automorphism_part: tuple[DiagramAutomorphism, ...]
    order: int
    walls: frozenset
    reduction: AlcoveReduction
    automorphism_matrices: tuple[Mat, ...]

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def diagram(self) -> str:
        """Cartan types of the reflection part, e.g. ``"A1xA1"`` (``"1"`` if trivial)."""
        types = sorted(c.cartan_type for c in self.weyl_part.components)
        return "x".join(types) if types else "1"

    def reflections(self) -> set[Vec]:
        """Positive-normalized roots whose reflections lie in the reflection part."""
        return {_sign_normalize(a) for a in self.weyl_part.positive_roots}

    def to_dict(self) -> dict:
        return {"type": "congruential_group", "order": self.order, "diagram": self.diagram,
                "walls": sorted(self.walls),
                "weyl_part": [ex.fmt_vec(a) for a in self.weyl_part.simple_roots],
                "ambient_dim": self.weyl_part.ambient_dim,
                "weyl_part_order": self.weyl_part.weyl_group_order,
                "automorphisms": [d.to_dict() for d in self.automorphism_part],
                "automorphism_matrices": [[ex.fmt_vec(r) for r in m] for m in self.automorphism_matrices],
                "reduction": self.reduction.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "CongruentialGroup":
        rd = RootDatum.from_simple_roots([ex.parse_vec(a) for a in data["weyl_part"]], data["ambient_dim"])
        red = AlcoveReduction.from_dict(data["reduction"])
        from .affine import AffineElement
        auts = tuple(DiagramAutomorphism({i: j for i, j in a["permutation"]},
                                         ex.parse_vec(a["source_coset"]),
                                         AffineElement.identity(rd.ambient_dim))
                     for a in data["automorphisms"])
        mats = tuple(tuple(ex.parse_vec(r) for r in m) for m in data["automorphism_matrices"])
        return cls(rd, auts, data["order"], frozenset(data["walls"]), red, mats)


def _sign_normalize(a: Vec) -> Vec:
    first = next(x for x in a if x != 0)
    return ex.neg(a) if first < 0 else a


def congruential_subgroup(spec_or_rd, lattice: Lattice | None, v: Sequence) -> CongruentialGroup:
    """``W^{v+Λ}`` for a subweight lattice ``Λ`` (default: the translation lattice)."""
    system = system_for(spec_or_rd)
    rd = system.root_datum
    if lattice is None:
        lattice = system.translations
    v = ex.vec(v)
    red = reduce_to_alcove(system, v)
    auts = [d for d in diagram_automorphisms(system, lattice) if d.fixes(red.v_bar)]
    m = red.element.linear
    m_t = ex.transpose(m)
    betas = [ex.mat_vec(m_t, system.roots[j]) for j in sorted(red.walls)]
    weyl = RootDatum.from_simple_roots(betas, rd.ambient_dim)
    # ρ^-1 ψ ρ has linear part M^T L M (M is orthogonal)
    mats = tuple(ex.mat_mul(m_t, ex.mat_mul(d.element.linear, m)) for d in auts)
    order = weyl.weyl_group_order * len(auts)
    return CongruentialGroup(weyl, tuple(auts), order, red.walls, red, mats)


def effective_power(spec: GroupSpec, p: int, n: int | None = None) -> int:
    """Power of ``¹X`` governing ``(ⁿX)^p``: ``p/gcd(n, p)``."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    if n is None:
        n = spec.twist.n if spec.twist is not None else 1
    return p // gcd(n, p)


def w_p(spec: GroupSpec, p: int, n: int | None = None) -> CongruentialGroup:
    """``W^(p) = W^{δ/p + Λ^G}`` (for a cycle length ``n``, at the effective power)."""
    q = effective_power(spec, p, n)
    return congruential_subgroup(spec, spec.lattice, ex.scale(Fraction(1, q), spec.weyl_vector))


SCALINGS = ("coroot", "root_length")


def normalized_functionals(spec: GroupSpec, system: AffineSystem | None = None, scaling: str | None = None) -> dict:
    """Per affine node, the vector ``ṽ`` is paired with to read off its table entry.

    ``"coroot"``: the coroot of the node root.  ``"root_length"``: the root
    itself rescaled so long roots have squared length 2.  The default is the
    coroot for untwisted groups and the rescaled root for the folded
    ``G2``/``F4`` cases.
    """
    system = system or system_for(spec)
    if scaling is None:
        scaling = "root_length" if spec.twist is not None and spec.twist.affine_twisted else "coroot"
    if scaling == "root_length":
        k = twist_scale(spec.root_datum)
        return {i: ex.scale(k, r) for i, r in system.roots.items()}
    if scaling == "coroot":
        return {i: ex.coroot(r) for i, r in system.roots.items()}
    raise ValueError(f"unknown scaling {scaling!r}; expected one of {', '.join(SCALINGS)}")


@dataclass(frozen=True)
class PowerConditions:
    is_weyl: bool
    weyl_vector_condition: bool
    center_connected: bool

    def to_dict(self) -> dict:
        return {"type": "power_conditions", "is_weyl": self.is_weyl,
                "weyl_vector_condition": self.weyl_vector_condition,
                "center_connected": self.center_connected}

    @classmethod
    def from_dict(cls, data: dict) -> "PowerConditions":
        return cls(data["is_weyl"], data["weyl_vector_condition"], data["center_connected"])


def center_connected(spec: GroupSpec) -> bool:
    """``Λ_0 = Λ_a``."""
    return spec.lattice0 == spec.translations


def power_conditions(spec: GroupSpec, p: int, n: int | None = None) -> PowerConditions:
    group = w_p(spec, p, n)
    system = system_for(spec)
    funcs = normalized_functionals(spec, system)
    tilde = group.reduction.v_tilde
    walls = sorted(group.walls)
    if walls:
        roots = [system.roots[j] for j in walls]
        proj = ex.project(tilde, roots)
        # the Weyl vector of the wall subsystem, in the same normalization
        gram = [[ex.dot(r, funcs[j]) for r in roots] for j in walls]
        coeffs = ex.solve(gram, [1] * len(walls))
        delta_j = ex.zero(len(tilde))
        for c, r in zip(coeffs, roots):
            delta_j = ex.axpy(c, r, delta_j)
        wv = proj == delta_j
    else:
        wv = True
    return PowerConditions(len(group.automorphism_part) == 1, wv, center_connected(spec))


@dataclass(frozen=True)
class Threshold:
    """``h``: maximum Coxeter number; powers ``p > h`` are always i.i.d. and ``p = h`` is iff ``iid_at_h``."""

    h: int
    iid_at_h: bool
    note: str = ""

    @property
    def first_iid_power(self) -> int:
        return self.h if self.iid_at_h else self.h + 1

    def describe(self) -> str:
        return f"h={self.h}, iid for p>={self.h}" if self.iid_at_h else f"h={self.h}, iid for p>{self.h}"

    def to_dict(self) -> dict:
        return {"type": "threshold", "h": self.h, "iid_at_h": self.iid_at_h,
                "first_iid_power": self.first_iid_power, "note": self.note}

    @classmethod
    def from_dict(cls, data: dict) -> "Threshold":
        return cls(data["h"], data["iid_at_h"], data.get("note", ""))


def independence_threshold(spec: GroupSpec) -> Threshold:
    rd = spec.root_datum
    h = max((c.coxeter_number for c in rd.components), default=1)
    note = ""
    if spec.twist is not None and spec.twist.kind not in ("U", "H"):
        note = ("twisted component: h is the Coxeter number of the effective Weyl group; "
                "p is first reduced by gcd(p, %d*n)" % spec.twist.threshold_factor)
    return Threshold(h, center_connected(spec), note)


@dataclass(frozen=True)
class TwistedReduction:
    base_power: int
    substitution_exponent: int
    threshold_power: int
    uniform_generators: int | None = None

    def to_dict(self) -> dict:
        return {"type": "twisted_reduction", "base_power": self.base_power,
                "substitution_exponent": self.substitution_exponent,
                "threshold_power": self.threshold_power,
                "uniform_generators": self.uniform_generators}


def twisted_reduce(twist: Twist | GroupSpec, p: int) -> TwistedReduction:
    """``(ⁿX)^p`` has density ``f(λ^{n/g})`` with ``f`` that of ``(¹X)^{p/g}``, ``g = gcd(n, p)``."""
    if isinstance(twist, GroupSpec):
        if twist.twist is None:
            twist = Twist("H", 1)
        else:
            twist = twist.twist
    if p < 1:
        raise ValueError("p must be a positive integer")
    g = gcd(twist.n, p)
    gens = None
    if twist.kind == "U":
        # one uniform generator for n = 1, none (constant eigenvalues) otherwise
        gens = 1 if twist.n == 1 else 0
    return TwistedReduction(p // g, twist.n // g, p // gcd(p, twist.threshold_factor * twist.n), gens)


def brute_force_stabilizer(rd: RootDatum, lattice: Lattice, v: Sequence, elements=None) -> list[Mat]:
    """All ``w ∈ W`` (enumerated) with ``w(v) - v ∈ lattice``; for small ranks only."""
    v = ex.vec(v)
    elements = elements if elements is not None else weyl_group_elements(rd)
    return [w for w in elements if lattice.contains(ex.sub(ex.mat_vec(w, v), v))]


def reflection_matrix(a: Vec) -> Mat:
    n = len(a)
    ac = ex.coroot(a)
    return tuple(tuple(Fraction(int(i == j)) - a[i] * ac[j] for j in range(n)) for i in range(n))


def weyl_group_elements(rd: RootDatum, limit: int = 100_000) -> list[Mat]:
    """Enumerate ``W`` as exact matrices by closing the simple reflections."""
    n = rd.ambient_dim
    gens = [reflection_matrix(a) for a in rd.simple_roots]
    ident = ex.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                x = ex.mat_mul(s, w)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if len(seen) > limit:
                        raise ValueError("Weyl group too large to enumerate")
        frontier = nxt
    return sorted(seen)
