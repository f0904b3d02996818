"""Exact eigenvalue densities as sparse Laurent polynomials.

A density is a Laurent polynomial in torus variables ``λ_0..λ_{n-1}`` whose
coefficient at ``μ`` is ``∫ π μ̄ dT``.  Densities are symmetric under ``S_n``
(unitary type: permutations) or ``B_n`` (conjugate pairs: signed
permutations), so only one monomial per orbit is stored, keyed by its canonical
representative.  Stored coefficients are those of the symmetrized polynomial,
normalized so the constant term is 1.

Exponents are integers over a global denominator (1 or 2).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product as iproduct
from math import factorial, gcd, prod
from typing import Iterable, Mapping, Sequence

from . import exact as ex
from .classical import Component, Decomposition
from .rootsys import RootDatum, build_root_datum

DEFAULT_BUDGET = 20_000_000
SYMMETRIES = ("S", "B", "none")


class BudgetExceeded(RuntimeError):
    """An expansion would exceed the term budget; ``required`` says how much it needs."""

    def __init__(self, what: str, required: int, budget: int):
        super().__init__(f"{what} needs about {required} term operations, budget is {budget} "
                         f"(raise it with --budget)")
        self.required = required
        self.budget = budget


def _charge(what: str, cost: int, budget: int | None) -> None:
    if budget is not None and cost > budget:
        raise BudgetExceeded(what, cost, budget)


# -- exponent vectors and orbits ------------------------------------------------


@dataclass(frozen=True)
class ExponentVector:
    """``entries / denominator``, reduced so the denominator is as small as possible."""

    entries: tuple[int, ...]
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        g = self.denominator
        for x in self.entries:
            g = gcd(g, x)
        if g > 1:
            object.__setattr__(self, "entries", tuple(x // g for x in self.entries))
            object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def of(cls, values: Iterable) -> "ExponentVector":
        vals = [Fraction(v) for v in values]
        d = ex.common_denominator([vals])
        return cls(tuple(int(v * d) for v in vals), d)

    def scaled_to(self, den: int) -> tuple[int, ...]:
        """Entries over denominator ``den``; ``None`` if not representable."""
        if den % self.denominator:
            raise ValueError("denominator mismatch")
        f = den // self.denominator
        return tuple(x * f for x in self.entries)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.denominator) for x in self.entries)

    def __mul__(self, p: int) -> "ExponentVector":
        return ExponentVector(tuple(p * x for x in self.entries), self.denominator)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ", ".join(ex.fmt(v) for v in self.values()) + ")"


def canonical(exps: Sequence[int], symmetry: str) -> tuple[int, ...]:
    if symmetry == "S":
        return tuple(sorted(exps))
    if symmetry == "B":
        return tuple(sorted(abs(x) for x in exps))
    if symmetry == "none":
        return tuple(exps)
    raise ValueError(f"unknown symmetry {symmetry!r}")


def _multiset_perm_count(values: Sequence[int]) -> int:
    counts = defaultdict(int)
    for v in values:
        counts[v] += 1
    return factorial(len(values)) // prod(factorial(c) for c in counts.values())


def orbit_size(exps: Sequence[int], symmetry: str) -> int:
    if symmetry == "S":
        return _multiset_perm_count(exps)
    if symmetry == "B":
        absv = [abs(x) for x in exps]
        return _multiset_perm_count(absv) * 2 ** sum(1 for x in absv if x)
    return 1


def orbit(exps: Sequence[int], symmetry: str) -> Iterable[tuple[int, ...]]:
    """All distinct images of ``exps`` under the symmetry group."""
    if symmetry == "none":
        yield tuple(exps)
        return
    base = sorted(abs(x) for x in exps) if symmetry == "B" else sorted(exps)
    for perm in _distinct_permutations(base):
        if symmetry == "S":
            yield perm
            continue
        nz = [i for i, x in enumerate(perm) if x]
        for signs in iproduct((1, -1), repeat=len(nz)):
            out = list(perm)
            for i, s in zip(nz, signs):
                out[i] = s * out[i]
            yield tuple(out)


def _distinct_permutations(items: list[int]) -> Iterable[tuple[int, ...]]:
    if len(items) <= 8:
        yield from sorted(set(permutations(items)))
        return
    # lexicographic next-permutation over a sorted multiset
    a = sorted(items)
    while True:
        yield tuple(a)
        i = len(a) - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(a) - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


# -- densities ------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentDensity:
    """Symmetrized, normalized density stored by orbit representatives."""

    nvars: int
    symmetry: str
    denominator: int
    terms: Mapping[tuple[int, ...], Fraction] = field(repr=False)

    def coefficient(self, mu: ExponentVector | Sequence) -> Fraction:
        mu = mu if isinstance(mu, ExponentVector) else ExponentVector.of(mu)
        if len(mu.entries) != self.nvars:
            raise ValueError(f"exponent has {len(mu.entries)} entries, density has {self.nvars} variables")
        if self.denominator % mu.denominator:
            return Fraction(0)
        return self.terms.get(canonical(mu.scaled_to(self.denominator), self.symmetry), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def expand(self) -> dict:
        """All monomials (over :attr:`denominator`) with their coefficients."""
        out = {}
        for rep, c in self.terms.items():
            for m in orbit(rep, self.symmetry):
                out[m] = c
        return out

    @property
    def expanded_size(self) -> int:
        return sum(orbit_size(rep, self.symmetry) for rep in self.terms)

    def evaluate(self, angles: Sequence[float]) -> complex:
        """Numeric value at ``λ_k = exp(i θ_k)``."""
        import cmath
        total = 0j
        for m, c in self.expand().items():
            total += float(c) * cmath.exp(1j * sum(x * t for x, t in zip(m, angles)) / self.denominator)
        return total

    def to_dict(self) -> dict:
        return {"type": "laurent_density", "nvars": self.nvars, "symmetry": self.symmetry,
                "denominator": self.denominator,
                "terms": [[list(k), ex.fmt(v)] for k, v in sorted(self.terms.items())]}

    @classmethod
    def from_dict(cls, data: dict) -> "LaurentDensity":
        return cls(data["nvars"], data["symmetry"], data["denominator"],
                   {tuple(k): Fraction(v) for k, v in data["terms"]})


def symmetrize(raw: Mapping[tuple[int, ...], int | Fraction], nvars: int, symmetry: str,
               denominator: int = 1, normalize: bool = True) -> LaurentDensity:
    """Average ``raw`` over the symmetry group and store it by orbit representatives."""
    bins = defaultdict(Fraction)
    for m, c in raw.items():
        if c:
            bins[canonical(m, symmetry)] += c
    terms = {}
    for rep, c in bins.items():
        if c:
            terms[rep] = Fraction(c) / orbit_size(rep, symmetry)
    if normalize:
        const = terms.get((0,) * nvars)
        if not const:
            raise ValueError("density has zero total mass")
        terms = {k: v / const for k, v in terms.items()}
    # reduce the global denominator when possible
    g = denominator
    for rep in terms:
        for x in rep:
            g = gcd(g, x)
    if g > 1:
        terms = {tuple(x // g for x in k): v for k, v in terms.items()}
        denominator //= g
    return LaurentDensity(nvars, symmetry, denominator, terms)


def num_vars(c: Component) -> int:
    """Number of torus variables of a component (free eigenvalues or free pairs)."""
    return c.free_pairs


def symmetry_of(c: Component) -> str:
    return "S" if c.kind == "U" else "B"


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def unitary_inner_sum(n: int, budget: int | None = DEFAULT_BUDGET) -> dict:
    """``Σ_π σ(π) Π λ_k^{k - π(k)}``."""
    _charge(f"U({n}) inner sum", factorial(n), budget)
    out = defaultdict(int)
    for perm in permutations(range(n)):
        out[tuple(k - perm[k] for k in range(n))] += _perm_sign(perm)
    return out


def hyperoctahedral_inner_sum(delta: Sequence[Fraction], character: str,
                              budget: int | None = DEFAULT_BUDGET) -> tuple[dict, int]:
    """``Σ_{ρ ∈ B_n} σ(ρ) λ^{δ - ρδ}`` with ``σ`` = ``"sigma1"`` (sign of the permutation) or ``"sigma2"`` (determinant)."""
    n = len(delta)
    _charge(f"B_{n} inner sum", 2 ** n * factorial(n), budget)
    d = ex.common_denominator([delta])
    dv = [int(x * d) for x in delta]
    out = defaultdict(int)
    for perm in permutations(range(n)):
        ps = _perm_sign(perm)
        for signs in iproduct((1, -1), repeat=n):
            sg = ps if character == "sigma1" else ps * prod(signs)
            out[tuple(dv[k] - signs[k] * dv[perm[k]] for k in range(n))] += sg
    return out, d


_ORTHO = {
    # kind, parity -> (delta builder from m free pairs, character)
    ("Oplus", 0): (lambda m: [Fraction(k) for k in range(m)], "sigma1"),
    ("Ominus", 0): (lambda m: [Fraction(k) for k in range(1, m + 1)], "sigma2"),
    ("Oplus", 1): (lambda m: [Fraction(2 * k + 1, 2) for k in range(m)], "sigma2"),
    ("Ominus", 1): (lambda m: [Fraction(2 * k + 1, 2) for k in range(m)], "sigma1"),
}


def density(c: Component, budget: int | None = DEFAULT_BUDGET) -> LaurentDensity:
    """Symmetrized, normalized eigenvalue density of one component."""
    m = num_vars(c)
    if c.kind == "U":
        return symmetrize(unitary_inner_sum(m, budget), m, "S")
    if c.kind == "ReU":
        return symmetrize(unitary_inner_sum(m, budget), m, "B")
    if c.kind == "Sp":
        if m == 0:
            return symmetrize({(): 1}, 0, "B")
        return weyl_density(build_root_datum("C", m), "B", budget)
    key = (c.kind, c.size % 2)
    builder, character = _ORTHO[key]
    raw, d = hyperoctahedral_inner_sum(builder(m), character, budget)
    return symmetrize(raw, m, "B", d)


def weyl_density(rd: RootDatum, symmetry: str, budget: int | None = DEFAULT_BUDGET) -> LaurentDensity:
    """Density ``Sym_W Σ_w σ(w) λ^{δ - wδ}`` built from the root datum itself.

    ``W`` is traversed as the orbit of the (regular) Weyl vector; each simple
    reflection step flips the sign.  Coordinates are the ambient ones.
    """
    _charge(f"{rd.family} orbit", rd.weyl_group_order, budget)
    delta = rd.weyl_vector
    sign = {delta: 1}
    frontier = [delta]
    while frontier:
        nxt = []
        for x in frontier:
            for a in rd.simple_roots:
                y = ex.reflect(x, a)
                if y not in sign:
                    sign[y] = -sign[x]
                    nxt.append(y)
        frontier = nxt
    diffs = {ex.sub(delta, w): s for w, s in sign.items()}
    d = ex.common_denominator(diffs)
    raw = defaultdict(int)
    for v, s in diffs.items():
        raw[tuple(int(x * d) for x in v)] += s
    return symmetrize(raw, rd.ambient_dim, symmetry, d)


def p_divisible_part(d: LaurentDensity, p: int) -> LaurentDensity:
    """Keep monomials whose exponents are all multiples of ``p`` and divide them by ``p``."""
    if p < 1:
        raise ValueError("p must be positive")
    step = p * d.denominator
    terms = {tuple(x // step for x in k): v for k, v in d.terms.items()
             if all(x % step == 0 for x in k)}
    # exponents are integral after division, so the denominator becomes 1
    return LaurentDensity(d.nvars, d.symmetry, 1, terms)


def moment(d: LaurentDensity, mu: ExponentVector | Sequence) -> Fraction:
    """``∫ π μ̄ dT``: the coefficient of ``μ``."""
    return d.coefficient(mu)


def product_density(parts: Sequence[LaurentDensity], variable_assignment: Sequence[Sequence[int]] | None = None,
                    symmetry: str | None = None, budget: int | None = DEFAULT_BUDGET) -> LaurentDensity:
    """Product over disjoint variable blocks, then symmetrized over all variables."""
    n = sum(p.nvars for p in parts)
    if variable_assignment is None:
        variable_assignment, start = [], 0
        for p in parts:
            variable_assignment.append(list(range(start, start + p.nvars)))
            start += p.nvars
    if len(variable_assignment) != len(parts):
        raise ValueError("one variable block per part is required")
    if any(len(b) != p.nvars for b, p in zip(variable_assignment, parts)):
        raise ValueError("variable block sizes do not match the parts")
    flat = sorted(i for b in variable_assignment for i in b)
    if flat != list(range(n)):
        raise ValueError("variable blocks must partition 0..n-1")
    if symmetry is None:
        symmetry = parts[0].symmetry if parts else "S"
    live = [(p, b) for p, b in zip(parts, variable_assignment) if p.nvars]
    if len(live) == 1 and live[0][0].symmetry == symmetry and list(live[0][1]) == list(range(n)):
        return live[0][0]
    den = 1
    for p in parts:
        den = den * p.denominator // gcd(den, p.denominator)
    _charge("product expansion", prod(p.expanded_size for p, _ in live), budget)
    acc = {(0,) * n: Fraction(1)}
    for p, block in live:
        f = den // p.denominator
        nxt = {}
        full = p.expand()
        for m, c in acc.items():
            for e, ce in full.items():
                out = list(m)
                for i, x in zip(block, e):
                    out[i] = x * f
                out = tuple(out)
                nxt[out] = nxt.get(out, 0) + c * ce
        acc = nxt
    return symmetrize(acc, n, symmetry, den, normalize=True)


def decomposition_density(dec: Decomposition, symmetry: str, budget: int | None = DEFAULT_BUDGET) -> LaurentDensity:
    parts = [density(c, budget) for c in dec.components]
    return product_density(parts, None, symmetry, budget)


@dataclass(frozen=True)
class Verification:
    ok: bool
    witness: tuple = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"type": "verification", "ok": self.ok, "reason": self.reason,
                "witness": [[str(e), ex.fmt(a), ex.fmt(b)] for e, a, b in self.witness]}


def compare_densities(lhs: LaurentDensity, rhs: LaurentDensity, limit: int = 5) -> Verification:
    if lhs.nvars != rhs.nvars:
        return Verification(False, (("free eigenvalues", Fraction(lhs.nvars), Fraction(rhs.nvars)),),
                            "variable counts differ")
    if lhs.symmetry != rhs.symmetry:
        return Verification(False, (), f"symmetries differ: {lhs.symmetry} vs {rhs.symmetry}")
    den = lhs.denominator * rhs.denominator // gcd(lhs.denominator, rhs.denominator)
    a = {tuple(x * (den // lhs.denominator) for x in k): v for k, v in lhs.terms.items()}
    b = {tuple(x * (den // rhs.denominator) for x in k): v for k, v in rhs.terms.items()}
    diffs = []
    for k in sorted(set(a) | set(b)):
        if a.get(k, 0) != b.get(k, 0):
            diffs.append((ExponentVector(k, den), Fraction(a.get(k, 0)), Fraction(b.get(k, 0))))
            if len(diffs) >= limit:
                break
    return Verification(not diffs, tuple(diffs), "" if not diffs else "coefficients differ")


def verify_identity(lhs: Component, p: int, rhs: Decomposition,
                    budget: int | None = DEFAULT_BUDGET) -> Verification:
    """Exact check that ``lhs^p`` and ``rhs`` have the same eigenvalue distribution."""
    want = sum(num_vars(c) for c in rhs.components)
    if num_vars(lhs) != want:
        # different numbers of free eigenvalues: the spectra cannot agree
        return Verification(False, (("free eigenvalues", Fraction(num_vars(lhs)), Fraction(want)),),
                            "variable counts differ")
    sym = symmetry_of(lhs)
    left = p_divisible_part(density(lhs, budget), p)
    right = decomposition_density(rhs, sym, budget)
    return compare_densities(left, right)


def trace_square_moment(d: LaurentDensity, k: int) -> Fraction:
    """``E|Tr U^k|^2`` for a unitary-type density (eigenvalues ``λ_i``)."""
    if d.symmetry != "S":
        raise ValueError("needs a unitary-type density")
    n = d.nvars
    if n == 0:
        return Fraction(0)
    if n == 1:
        return Fraction(1)
    cross = d.coefficient((k, -k) + (0,) * (n - 2))
    return n + n * (n - 1) * cross
