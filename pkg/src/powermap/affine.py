"""The affine Weyl group ``W ⋉ Λ_a``: alcove reduction, walls, diagram automorphisms.

Affine nodes are labelled as follows: simple root ``k`` (0-based in
``RootDatum.simple_roots``) is node ``k + 1``; the extra node of the first simple
factor is ``0`` and that of factor ``c > 0`` is ``rank + c``.  Node ``i`` carries
the affine functional ``a_i(x) = <x, g_i> + [i is an extra node]``; the closed
fundamental alcove is ``{a_i >= 0 for all i}``.

For the root lattice the gradients are the simple coroots and
``g_0 = -θ_s^∨``, where ``θ_s`` is the highest short root, i.e. ``W ⋉ Λ_a`` is
the affine Weyl group of the dual root system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import exact as ex
from .exact import Mat, Vec
from .rootsys import GroupSpec, Lattice, RootDatum, quotient_group, wall_gradients

MAX_STEPS = 1_000_000


class ReductionError(RuntimeError):
    """Raised when alcove reduction fails to terminate (an implementation bug)."""


@dataclass(frozen=True)
class AffineElement:
    """The map ``x -> linear @ x + translation``."""

    linear: Mat
    translation: Vec

    @classmethod
    def identity(cls, n: int) -> "AffineElement":
        return cls(ex.identity(n), ex.zero(n))

    def __call__(self, x: Sequence) -> Vec:
        return ex.add(ex.mat_vec(self.linear, ex.vec(x)), self.translation)

    def linear_part(self, x: Sequence) -> Vec:
        return ex.mat_vec(self.linear, ex.vec(x))

    def compose(self, other: "AffineElement") -> "AffineElement":
        """``self ∘ other``."""
        return AffineElement(ex.mat_mul(self.linear, other.linear), self(other.translation))

    @property
    def is_identity(self) -> bool:
        n = len(self.translation)
        return self.linear == ex.identity(n) and not any(self.translation)

    def to_dict(self) -> dict:
        return {"type": "affine_element", "linear": [ex.fmt_vec(r) for r in self.linear],
                "translation": ex.fmt_vec(self.translation)}

    @classmethod
    def from_dict(cls, data: dict) -> "AffineElement":
        return cls(tuple(ex.parse_vec(r) for r in data["linear"]), ex.parse_vec(data["translation"]))


@dataclass(frozen=True, eq=False)
class AffineSystem:
    """Walls of ``W ⋉ Λ_a`` through the closed fundamental alcove.

    ``roots[i]`` is the root of ``W`` proportional to the gradient of node ``i``.
    """

    root_datum: RootDatum
    translations: Lattice
    nodes: tuple[int, ...]
    gradients: dict
    constants: dict
    marks: dict
    node_component: dict
    roots: dict

    @property
    def ambient_dim(self) -> int:
        return self.root_datum.ambient_dim

    def extra_node(self, component: int) -> int:
        return 0 if component == 0 else self.root_datum.rank + component

    def coroot(self, node: int) -> Vec:
        return ex.coroot(self.gradients[node])

    def value(self, node: int, x: Sequence) -> Fraction:
        """``a_node(x)``."""
        return ex.dot(x, self.gradients[node]) + self.constants[node]

    def values(self, x: Sequence) -> dict:
        return {i: self.value(i, x) for i in self.nodes}

    def reflect(self, node: int, x: Vec) -> Vec:
        return ex.axpy(-self.value(node, x), self.coroot(node), x)

    def cartan_matrix(self) -> dict:
        """``2<g_i, g_j>/<g_j, g_j>`` over all pairs of nodes."""
        g = self.gradients
        return {(i, j): 2 * ex.dot(g[i], g[j]) / ex.norm2(g[j]) for i in self.nodes for j in self.nodes}

    def in_alcove(self, x: Sequence) -> bool:
        return all(self.value(i, x) >= 0 for i in self.nodes)

    def interior_point(self) -> Vec:
        """The point of the root span where every ``a_i`` equals ``1/Σ marks`` on its factor."""
        rd = self.root_datum
        if rd.rank == 0:
            return ex.zero(rd.ambient_dim)
        height = {}
        for i in self.nodes:
            c = self.node_component[i]
            height[c] = height.get(c, 0) + self.marks[i]
        rows = [[ex.dot(a, self.gradients[k + 1]) for a in rd.simple_roots] for k in range(rd.rank)]
        rhs = [Fraction(1, height[self.node_component[k + 1]]) for k in range(rd.rank)]
        coeffs = ex.solve(rows, rhs)
        out = ex.zero(rd.ambient_dim)
        for c, a in zip(coeffs, rd.simple_roots):
            out = ex.axpy(c, a, out)
        return out


def _highest(rd: RootDatum, grads: Sequence[Vec], comp) -> tuple[Vec, tuple[int, ...], Vec]:
    """Highest gradient of one factor, its marks, and the root it belongs to."""
    index = {c: i for i, c in enumerate(rd.positive_root_coeffs)}
    simple = {k: grads[index[tuple(int(j == k) for j in range(rd.rank))]] for k in comp.indices}
    best, best_m, best_root = None, None, None
    for a, coeffs, g in zip(rd.positive_roots, rd.positive_root_coeffs, grads):
        if any(coeffs[j] for j in range(rd.rank) if j not in comp.indices):
            continue
        # g = scale * a, and a = sum coeffs_k alpha_k, alpha_k = g_k / scale_k
        scale = ex.dot(g, a) / ex.norm2(a)
        m = []
        for k in comp.indices:
            sk = ex.dot(simple[k], rd.simple_roots[k]) / ex.norm2(rd.simple_roots[k])
            m.append(coeffs[k] * scale / sk)
        if best_m is None or sum(m) > sum(best_m):
            best, best_m, best_root = g, m, a
    if any(Fraction(x).denominator != 1 for x in best_m):
        raise ValueError("gradients do not form a crystallographic system")
    return best, tuple(int(x) for x in best_m), best_root


def affine_system(rd: RootDatum, translations: Lattice | None = None) -> AffineSystem:
    """The affine Weyl group ``W ⋉ translations`` (default: the root lattice)."""
    if translations is None:
        translations = rd.root_lattice
    return _affine_system(rd, translations)


@lru_cache(maxsize=64)
def _affine_system(rd: RootDatum, translations: Lattice) -> AffineSystem:
    grads = wall_gradients(rd, translations)
    index = {c: i for i, c in enumerate(rd.positive_root_coeffs)}
    gradients, constants, marks, node_comp, roots = {}, {}, {}, {}, {}
    for k in range(rd.rank):
        gradients[k + 1] = grads[index[tuple(int(j == k) for j in range(rd.rank))]]
        constants[k + 1] = Fraction(0)
        roots[k + 1] = rd.simple_roots[k]
    for c, comp in enumerate(rd.components):
        top, m, root = _highest(rd, grads, comp)
        node = 0 if c == 0 else rd.rank + c
        gradients[node] = ex.neg(top)
        roots[node] = ex.neg(root)
        constants[node] = Fraction(1)
        marks[node] = 1
        node_comp[node] = c
        for k, mk in zip(comp.indices, m):
            marks[k + 1] = mk
            node_comp[k + 1] = c
    nodes = tuple(sorted(gradients))
    return AffineSystem(rd, translations, nodes, gradients, constants, marks, node_comp, roots)


def system_for(spec_or_rd) -> AffineSystem:
    if isinstance(spec_or_rd, AffineSystem):
        return spec_or_rd
    if isinstance(spec_or_rd, GroupSpec):
        return affine_system(spec_or_rd.root_datum, spec_or_rd.translations)
    return affine_system(spec_or_rd)


@dataclass(frozen=True)
class AlcoveReduction:
    """``v_bar = ρ(v)`` in the closed alcove and ``v_tilde = (Dρ)(v)``."""

    v_bar: Vec
    v_tilde: Vec
    element: AffineElement
    walls: frozenset

    def to_dict(self) -> dict:
        return {"type": "alcove_reduction", "v_bar": ex.fmt_vec(self.v_bar),
                "v_tilde": ex.fmt_vec(self.v_tilde), "element": self.element.to_dict(),
                "walls": sorted(self.walls)}

    @classmethod
    def from_dict(cls, data: dict) -> "AlcoveReduction":
        return cls(ex.parse_vec(data["v_bar"]), ex.parse_vec(data["v_tilde"]),
                   AffineElement.from_dict(data["element"]), frozenset(data["walls"]))


def _apply_reflection(system: AffineSystem, node: int, lin: list, trans: Vec) -> tuple[list, Vec]:
    g = system.gradients[node]
    gc = system.coroot(node)
    # rows of lin are updated as lin - gc (g^T lin)
    n = len(trans)
    gl = [sum((g[r] * lin[r][c] for r in range(n) if g[r]), Fraction(0)) for c in range(n)]
    lin = [[lin[r][c] - gc[r] * gl[c] for c in range(n)] if gc[r] else lin[r] for r in range(n)]
    trans = ex.axpy(-system.value(node, trans), gc, trans)
    return lin, trans


def reduce_to_alcove(spec_or_rd, v: Sequence, strategy: str = "lowest") -> AlcoveReduction:
    """Move ``v`` into the closed fundamental alcove.

    Repeatedly reflect in a violated wall (the lowest-index one, or the highest
    with ``strategy="highest"``), then reflect in walls through ``v_bar`` until
    ``v_tilde`` pairs non-negatively with their gradients.  The components of
    ``v`` orthogonal to the roots are never touched.
    """
    if strategy not in ("lowest", "highest"):
        raise ValueError(f"unknown strategy {strategy!r}")
    system = system_for(spec_or_rd)
    v = ex.vec(v)
    n = system.ambient_dim
    if len(v) != n:
        raise ValueError(f"dimension mismatch: expected {n} coordinates, got {len(v)}")
    order = system.nodes if strategy == "lowest" else tuple(reversed(system.nodes))
    lin = [list(r) for r in ex.identity(n)]
    trans = ex.zero(n)
    x = v
    for _ in range(MAX_STEPS):
        bad = next((i for i in order if system.value(i, x) < 0), None)
        if bad is None:
            break
        lin, trans = _apply_reflection(system, bad, lin, trans)
        x = system.reflect(bad, x)
    else:
        raise ReductionError("alcove reduction did not terminate")
    walls = frozenset(i for i in system.nodes if system.value(i, x) == 0)
    wall_order = [i for i in order if i in walls]
    tilde = ex.mat_vec(tuple(map(tuple, lin)), v)
    for _ in range(MAX_STEPS):
        bad = next((i for i in wall_order if ex.dot(tilde, system.gradients[i]) < 0), None)
        if bad is None:
            break
        lin, trans = _apply_reflection(system, bad, lin, trans)
        tilde = ex.mat_vec(tuple(map(tuple, lin)), v)
    else:
        raise ReductionError("parabolic reduction did not terminate")
    element = AffineElement(tuple(map(tuple, lin)), trans)
    return AlcoveReduction(x, tilde, element, walls)


def wall_incidence(spec_or_rd, v_bar: Sequence) -> frozenset:
    """Affine nodes whose walls pass through ``v_bar`` (which must lie in the closed alcove)."""
    system = system_for(spec_or_rd)
    vals = system.values(ex.vec(v_bar))
    if any(x < 0 for x in vals.values()):
        raise ValueError("point is not in the closed fundamental alcove")
    return frozenset(i for i, x in vals.items() if x == 0)


@dataclass(frozen=True)
class DiagramAutomorphism:
    """Alcove symmetry ``ψ = ρ_λ ∘ t_λ`` induced by the coset of ``λ``.

    ``permutation[i]`` is the node whose wall is the image of wall ``i``.
    """

    permutation: dict
    source_coset: Vec
    element: AffineElement

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in self.permutation.items())

    def fixes(self, x: Sequence) -> bool:
        return self.element(x) == ex.vec(x)

    def to_dict(self) -> dict:
        return {"type": "diagram_automorphism",
                "permutation": [[i, j] for i, j in sorted(self.permutation.items())],
                "source_coset": ex.fmt_vec(self.source_coset)}


def _check_lattice(system: AffineSystem, lattice: Lattice) -> None:
    if not lattice.contains_lattice(system.translations):
        raise ValueError("lattice does not contain the translation lattice")
    if not all(ex.dot(b, g).denominator == 1 for b in lattice.basis for g in system.gradients.values()):
        raise ValueError("lattice is not a subweight lattice")


def diagram_automorphisms(spec_or_rd, lattice: Lattice) -> list[DiagramAutomorphism]:
    """One alcove automorphism per coset of ``Λ_0/Λ_a`` with ``Λ_0 = lattice ∩ RΛ_a``."""
    system = system_for(spec_or_rd)
    rd = system.root_datum
    _check_lattice(system, lattice)
    lat0 = lattice.intersect_span(rd.simple_roots) if rd.rank else Lattice.from_generators([], rd.ambient_dim)
    if rd.rank == 0:
        return [DiagramAutomorphism({}, ex.zero(rd.ambient_dim), AffineElement.identity(rd.ambient_dim))]
    quot = quotient_group(lat0, system.translations)
    centre = system.interior_point()
    out = []
    for lam in quot.representatives:
        red = reduce_to_alcove(system, ex.add(centre, lam))
        shift = AffineElement(ex.identity(rd.ambient_dim), lam)
        psi = red.element.compose(shift)
        lin_t = ex.transpose(psi.linear)
        perm = {}
        for j in system.nodes:
            grad = ex.mat_vec(lin_t, system.gradients[j])
            const = ex.dot(psi.translation, system.gradients[j]) + system.constants[j]
            src = [i for i in system.nodes
                   if system.gradients[i] == grad and system.constants[i] == const]
            if len(src) != 1:
                raise ReductionError("coset translation does not permute the alcove walls")
            perm[src[0]] = j
        out.append(DiagramAutomorphism(perm, lam, psi))
    return out
