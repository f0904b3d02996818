"""Closed-form power decompositions for the classical groups.

Components are ``U(m)``, ``O+(m)``, ``O-(m)`` (the determinant ``±1`` cosets),
``ReU(m)`` (``U(m)`` viewed inside ``O(2m)``) and ``Sp(2m)``.  A decomposition
is a multiset of independent components whose union of eigenvalues has the same
law as the powered input, ignoring forced eigenvalues ``±1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

KINDS = ("U", "Oplus", "Ominus", "ReU", "Sp")
_NAMES = {"U": "U", "Oplus": "O+", "Ominus": "O-", "ReU": "ReU", "Sp": "Sp"}


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True, order=True)
class Component:
    """``kind(size)``; ``size`` is the matrix dimension (``2m`` for ``Sp(2m)``)."""

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown component kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.size < 0:
            raise ValueError("component size must be non-negative")
        if self.kind == "Sp" and self.size % 2:
            raise ValueError("Sp(2m) needs an even size")

    @property
    def free_pairs(self) -> int:
        """Conjugate eigenvalue pairs not forced to ``±1`` (for ``U``: free eigenvalues)."""
        if self.kind in ("U", "ReU"):
            return self.size
        if self.kind == "Sp":
            return self.size // 2
        if self.kind == "Ominus" and self.size % 2 == 0:
            return max(self.size // 2 - 1, 0)
        return self.size // 2

    @property
    def forced(self) -> tuple[int, ...]:
        """Eigenvalues forced by the coset, as a sorted tuple over ``{-1, +1}``."""
        if self.kind == "Oplus":
            return (1,) if self.size % 2 else ()
        if self.kind == "Ominus":
            if self.size % 2:
                return (-1,)
            return (-1, 1) if self.size else ()
        return ()

    @property
    def is_trivial(self) -> bool:
        return self.free_pairs == 0

    def __str__(self) -> str:
        return f"{_NAMES[self.kind]}({self.size})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "size": self.size}

    @classmethod
    def parse(cls, text: str) -> "Component":
        text = text.strip()
        name, _, rest = text.partition("(")
        kinds = {v: k for k, v in _NAMES.items()}
        kinds.update({k: k for k in KINDS})
        if name not in kinds or not rest.endswith(")"):
            raise ValueError(f"cannot parse component {text!r}")
        return cls(kinds[name], int(rest[:-1]))


def U(n: int) -> Component:
    return Component("U", n)


def Oplus(n: int) -> Component:
    return Component("Oplus", n)


def Ominus(n: int) -> Component:
    return Component("Ominus", n)


def ReU(n: int) -> Component:
    return Component("ReU", n)


def Sp(two_n: int) -> Component:
    return Component("Sp", two_n)


def O(n: int, sign: int) -> Component:
    if sign not in (1, -1):
        raise ValueError("determinant sign must be +1 or -1")
    return Oplus(n) if sign == 1 else Ominus(n)


@dataclass(frozen=True)
class Decomposition:
    components: tuple[Component, ...]
    ignored_eigenvalues: tuple[int, ...] = field(default=())

    @property
    def free_pairs(self) -> int:
        return sum(c.free_pairs for c in self.components)

    def nontrivial(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.size > 0)

    def multiset(self) -> Counter:
        return Counter(self.components)

    def same_components(self, other: "Decomposition") -> bool:
        return self.multiset() == other.multiset()

    def render(self, show_trivial: bool = False) -> str:
        comps = self.components if show_trivial else self.nontrivial()
        return " (+) ".join(str(c) for c in comps) if comps else "trivial"

    def to_dict(self) -> dict:
        return {"type": "decomposition", "components": [c.to_dict() for c in self.components],
                "ignored_eigenvalues": list(self.ignored_eigenvalues)}

    @classmethod
    def from_dict(cls, data: dict) -> "Decomposition":
        return cls(tuple(Component(c["kind"], c["size"]) for c in data["components"]),
                   tuple(data.get("ignored_eigenvalues", ())))

    @classmethod
    def of(cls, *components: Component) -> "Decomposition":
        return cls(tuple(components), _forced(components))


def _forced(components) -> tuple[int, ...]:
    return tuple(sorted(x for c in components for x in c.forced))


def decompose_unitary(n: int, p: int) -> Decomposition:
    """``U(n)^p ~ (+)_{0<=i<p} U(ceil((n-i)/p))``, zero sizes kept."""
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    return Decomposition(tuple(U(ceil_div(n - i, p)) for i in range(p)))


def orthogonal_indices(N: int) -> tuple[int, bool]:
    """``(n, odd)`` with ``N = 2n`` or ``N = 2n + 1``."""
    if N < 1:
        raise ValueError("N must be positive")
    return N // 2, bool(N % 2)


def decompose_orthogonal(N: int, det_sign: int, p: int) -> Decomposition:
    """Power of the coset ``O^{det_sign}(N)``, ignoring eigenvalues ``±1``."""
    if p < 1:
        raise ValueError("p must be positive")
    if det_sign not in (1, -1):
        raise ValueError("determinant sign must be +1 or -1")
    n, odd = orthogonal_indices(N)
    s = det_sign
    n0 = ceil_div(n, p)
    n1 = ceil_div(n - p // 2, p)
    if p % 2:
        if not odd:
            comps = [O(2 * n0, s)]
            comps += [ReU(ceil_div(2 * (n - n0 - i), p - 1)) for i in range((p - 1) // 2)]
        else:
            comps = [ReU(ceil_div(2 * (n - n1 - i), p - 1)) for i in range((p - 1) // 2)]
            comps.append(O(2 * n1 + 1, s))
    else:
        if not odd:
            comps = [O(2 * n0, s)]
            comps += [ReU(ceil_div(2 * (n - n0 - n1 - i), p - 2)) for i in range((p - 2) // 2)]
            comps.append(O(2 * n1 + 1, -s))
        else:
            comps = [ReU(ceil_div(2 * (n - i), p)) for i in range(p // 2)]
    comps = tuple(comps)
    return Decomposition(comps, _forced(comps))


def intermediate_orthogonal(N: int, det_sign: int, p: int) -> Decomposition:
    """The same power before simplification, with ``ReU`` sizes as sums of two ceilings.

    The ``ReU`` factors come from pairs of residue classes ``{i, -i} mod p`` of
    the angle index; only used to cross-check :func:`decompose_orthogonal`.
    """
    n, odd = orthogonal_indices(N)
    s = det_sign
    if not odd:
        comps = [O(2 * ceil_div(n, p), s)]
        top = (p - 1) // 2 if p % 2 else p // 2 - 1
        comps += [ReU(ceil_div(n - i, p) + ceil_div(n + i, p) - 1) for i in range(1, top + 1)]
        if p % 2 == 0:
            comps.append(O(2 * ceil_div(n - p // 2, p) + 1, -s))
    else:
        top = (p - 1) // 2 if p % 2 else p // 2
        comps = [ReU(ceil_div(n - i, p) + ceil_div(n + 1 + i, p) - 1) for i in range(top)]
        if p % 2:
            comps.append(O(2 * ceil_div(n - (p - 1) // 2, p) + 1, s))
    comps = tuple(comps)
    return Decomposition(comps, _forced(comps))


def decompose_symplectic(two_n: int, p: int) -> Decomposition:
    """``Sp(2n) ~ O-(2n+2)`` ignoring the forced ``±1``, then powered."""
    if two_n < 2 or two_n % 2:
        raise ValueError("Sp needs an even size >= 2")
    d = decompose_orthogonal(two_n + 2, -1, p)
    return Decomposition(d.components, tuple(sorted(d.ignored_eigenvalues + (-1, 1))))


def reu_split(n: int) -> Decomposition:
    """``ReU(n) ~ O+(n+1) (+) O-(n+1)``, ignoring eigenvalues ``±1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    comps = (Oplus(n + 1), Ominus(n + 1))
    return Decomposition(comps, _forced(comps))


def decompose(component: Component, p: int) -> Decomposition:
    """Dispatch on the component kind."""
    if component.kind == "U":
        return decompose_unitary(component.size, p)
    if component.kind == "Oplus":
        return decompose_orthogonal(component.size, 1, p)
    if component.kind == "Ominus":
        return decompose_orthogonal(component.size, -1, p)
    if component.kind == "Sp":
        return decompose_symplectic(component.size, p)
    if component.kind == "ReU":
        if p != 1:
            raise ValueError("only p = 1 is supported for ReU (the O+ (+) O- split)")
        return reu_split(component.size)
    raise ValueError(component.kind)


def theorem_instances(unitary_n: int = 6, unitary_p: int = 8, pairs: int = 5, orthogonal_p: int = 6,
                      reu_n: int = 4, sp_n: int = 5):
    """``(lhs, p, rhs)`` triples covering every case of the power theorems.

    Unitary ``U(n)^p``; all orthogonal cosets with at most ``pairs`` free pairs;
    ``Sp(2n) ~ O-(2n+2)`` and the ``ReU`` split as ``p = 1`` identities.
    """
    out = []
    for n in range(1, unitary_n + 1):
        for p in range(1, unitary_p + 1):
            out.append((U(n), p, decompose_unitary(n, p)))
    for N in range(1, 2 * pairs + 3):
        for s in (1, -1):
            c = O(N, s)
            if c.free_pairs > pairs:
                continue
            for p in range(1, orthogonal_p + 1):
                out.append((c, p, decompose_orthogonal(N, s, p)))
    for n in range(1, sp_n + 1):
        out.append((Sp(2 * n), 1, Decomposition.of(Ominus(2 * n + 2))))
    for n in range(reu_n + 1):
        out.append((ReU(n), 1, reu_split(n)))
    return out


def matrix_dimension(c: Component) -> int:
    return 2 * c.size if c.kind == "ReU" else c.size
