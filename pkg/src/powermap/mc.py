"""Haar sampling of the classical cosets and two-sample trace statistics.

Samples are batches: ``angles`` has one row per random matrix and holds the
free eigenangles (forced ``±1`` eigenvalues removed).  Orthogonal-type rows
hold both ``θ`` and ``-θ`` for every free pair.

Randomness is split into fixed-size chunks, each with its own child of one
``SeedSequence``; results do not depend on how chunks are spread over workers.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classical import Component, Decomposition

CHUNK = 10_000
Z_GATE = 4.0


@dataclass(frozen=True, eq=False)
class AngleSample:
    angles: np.ndarray  # shape (count, width), values in (-pi, pi]
    pair_symmetric: bool

    @property
    def count(self) -> int:
        return self.angles.shape[0]

    @property
    def width(self) -> int:
        return self.angles.shape[1]

    def is_pair_closed(self, tol: float = 1e-9) -> bool:
        a = np.sort(self.angles, axis=1)
        b = np.sort(-self.angles, axis=1)
        diff = np.abs(np.angle(np.exp(1j * (a - b))))
        return bool(np.all(diff <= tol))


def wrap(theta: np.ndarray) -> np.ndarray:
    """Map angles into ``(-pi, pi]``."""
    out = np.mod(theta + np.pi, 2 * np.pi) - np.pi
    out = np.where(out <= -np.pi, out + 2 * np.pi, out)
    return out


def power_angles(sample: AngleSample, p: int) -> AngleSample:
    if p < 1:
        raise ValueError("p must be a positive integer")
    if p == 1:
        return sample
    return AngleSample(wrap(p * sample.angles), sample.pair_symmetric)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _haar_unitary(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _haar_orthogonal(rng: np.random.Generator, count: int, n: int, det_sign: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((count, n, n)))
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    wrong = np.linalg.det(q) * det_sign < 0
    # right multiplication by diag(-1, 1, ..., 1) moves Haar on one coset to the other
    q[wrong, :, 0] *= -1
    return q


def _haar_symplectic(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Compact ``Sp(2n)`` via quaternionic Gram-Schmidt.

    Column ``k`` is a complex Gaussian vector; its partner ``J conj(q_k)``
    completes a quaternionic line.  The construction is equivariant under the
    group, so the result is Haar distributed.
    """
    dim = 2 * n
    q = np.zeros((count, dim, dim), dtype=complex)

    def partner(v):
        return np.concatenate([-np.conj(v[:, n:]), np.conj(v[:, :n])], axis=1)

    for k in range(n):
        v = (rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))) / np.sqrt(2)
        for j in list(range(k)) + list(range(n, n + k)):
            col = q[:, :, j]
            v = v - np.sum(np.conj(col) * v, axis=1)[:, None] * col
        v = v / np.linalg.norm(v, axis=1)[:, None]
        q[:, :, k] = v
        q[:, :, n + k] = partner(v)
    return q


def _forced_counts(c: Component) -> tuple[int, int]:
    plus = sum(1 for x in c.forced if x == 1)
    return plus, len(c.forced) - plus


def _free_pairs_from_eigs(eigs: np.ndarray, plus: int, minus: int) -> np.ndarray:
    """Non-negative representatives of the free pairs, forced ``±1`` removed by count."""
    theta = np.abs(np.angle(eigs))
    theta = np.sort(theta, axis=1)
    # forced +1 sit at |angle| = 0 (front), forced -1 at pi (back)
    theta = theta[:, plus:theta.shape[1] - minus]
    return theta[:, ::2]


def _symmetric(pairs: np.ndarray) -> np.ndarray:
    return np.concatenate([pairs, -pairs], axis=1)


def sample_haar(component: Component, seed, count: int = 1, symplectic: str = "quaternionic") -> AngleSample:
    """``count`` independent Haar samples of a component's free eigenangles."""
    rng = _rng(seed)
    c = component
    m = c.free_pairs
    if c.kind == "U":
        if m == 0:
            return AngleSample(np.zeros((count, 0)), False)
        return AngleSample(np.angle(np.linalg.eigvals(_haar_unitary(rng, count, m))), False)
    if m == 0:
        return AngleSample(np.zeros((count, 0)), True)
    if c.kind == "ReU":
        th = np.angle(np.linalg.eigvals(_haar_unitary(rng, count, m)))
        return AngleSample(_symmetric(th), True)
    if c.kind == "Sp":
        if symplectic == "orthogonal":
            return sample_haar(Component("Ominus", c.size + 2), rng, count)
        if symplectic != "quaternionic":
            raise ValueError("symplectic must be 'quaternionic' or 'orthogonal'")
        eigs = np.linalg.eigvals(_haar_symplectic(rng, count, m))
        return AngleSample(_symmetric(_free_pairs_from_eigs(eigs, 0, 0)), True)
    sign = 1 if c.kind == "Oplus" else -1
    eigs = np.linalg.eigvals(_haar_orthogonal(rng, count, c.size, sign))
    plus, minus = _forced_counts(c)
    return AngleSample(_symmetric(_free_pairs_from_eigs(eigs, plus, minus)), True)


def sample_decomposition(d: Decomposition, seed, count: int = 1) -> AngleSample:
    """Concatenate independent samples of every component."""
    rng = _rng(seed)
    parts = [sample_haar(c, rng, count) for c in d.components]
    sym = all(p.pair_symmetric for p in parts) if parts else True
    if not parts:
        return AngleSample(np.zeros((count, 0)), sym)
    return AngleSample(np.concatenate([p.angles for p in parts], axis=1), sym)


def trace_statistics(sample: AngleSample, kmax: int) -> np.ndarray:
    """Columns ``Re Tr M^k`` then ``|Tr M^k|^2`` for ``k = 1..kmax``."""
    out = np.empty((sample.count, 2 * kmax))
    for k in range(1, kmax + 1):
        t = np.exp(1j * k * sample.angles).sum(axis=1)
        out[:, k - 1] = t.real
        out[:, kmax + k - 1] = (t * np.conj(t)).real
    return out


def statistic_names(kmax: int) -> list[str]:
    return [f"ReTr^{k}" for k in range(1, kmax + 1)] + [f"|Tr^{k}|^2" for k in range(1, kmax + 1)]


@dataclass(frozen=True)
class StatLine:
    name: str
    lhs_mean: float
    lhs_var: float
    rhs_mean: float
    rhs_var: float
    count: int
    z: float | None  # None when both sides are constant
    exact_match: bool | None = None

    def passes(self, gate: float = Z_GATE) -> bool:
        return self.exact_match if self.z is None else abs(self.z) < gate


@dataclass(frozen=True)
class StatReport:
    lhs: str
    p: int
    rhs: str
    samples: int
    kmax: int
    seed: int | None
    lines: tuple[StatLine, ...] = field(default=())

    @property
    def z_scores(self) -> dict:
        return {l.name: l.z for l in self.lines}

    @property
    def max_abs_z(self) -> float:
        zs = [abs(l.z) for l in self.lines if l.z is not None]
        return max(zs) if zs else 0.0

    def passes(self, gate: float = Z_GATE) -> bool:
        return all(l.passes(gate) for l in self.lines)

    def to_dict(self) -> dict:
        return {"type": "stat_report", "lhs": self.lhs, "p": self.p, "rhs": self.rhs,
                "samples": self.samples, "kmax": self.kmax, "seed": self.seed,
                "max_abs_z": self.max_abs_z, "passes": self.passes(),
                "statistics": [l.__dict__ for l in self.lines]}

    @classmethod
    def from_dict(cls, data: dict) -> "StatReport":
        return cls(data["lhs"], data["p"], data["rhs"], data["samples"], data["kmax"], data["seed"],
                   tuple(StatLine(**s) for s in data["statistics"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["statistic", "lhs_mean", "lhs_var", "rhs_mean", "rhs_var", "count", "z", "exact_match"])
        for l in self.lines:
            w.writerow([l.name, repr(l.lhs_mean), repr(l.lhs_var), repr(l.rhs_mean), repr(l.rhs_var),
                        l.count, "" if l.z is None else repr(l.z),
                        "" if l.exact_match is None else l.exact_match])
        return buf.getvalue()


def _chunk_sizes(n: int) -> list[int]:
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    return sizes


def _lhs_chunk(args):
    comp, seq, size = args
    return sample_haar(comp, np.random.default_rng(seq), size).angles


def _rhs_chunk(args):
    comp, seq, size = args
    return sample_haar(comp, np.random.default_rng(seq), size).angles


def _run(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _streams(seq: np.random.SeedSequence, samples: int):
    sizes = _chunk_sizes(samples)
    return list(zip(seq.spawn(len(sizes)), sizes))


def lhs_angles(lhs: Component, samples: int, seed, workers: int = 1) -> AngleSample:
    """The unpowered lhs sample ``compare`` uses for this seed (independent of ``p``)."""
    lhs_seq = np.random.SeedSequence(seed).spawn(2)[0]
    jobs = [(lhs, s, n) for s, n in _streams(lhs_seq, samples)]
    return AngleSample(np.concatenate(_run(_lhs_chunk, jobs, workers)), lhs.kind != "U")


def rhs_angles(rhs: Decomposition, samples: int, seed, workers: int = 1) -> AngleSample:
    """Each rhs component gets its own child stream, so components are independent."""
    rhs_seq = np.random.SeedSequence(seed).spawn(2)[1]
    blocks = []
    comps = rhs.components
    for comp, seq in zip(comps, rhs_seq.spawn(len(comps))):
        jobs = [(comp, s, n) for s, n in _streams(seq, samples)]
        blocks.append(np.concatenate(_run(_rhs_chunk, jobs, workers)))
    sym = all(c.kind != "U" for c in comps)
    if not blocks:
        return AngleSample(np.zeros((samples, 0)), sym)
    return AngleSample(np.concatenate(blocks, axis=1), sym)


def compare(lhs: Component, p: int, rhs: Decomposition, samples: int = 200_000, kmax: int = 6,
            seed: int | None = 0, workers: int = 1, lhs_sample: AngleSample | None = None) -> StatReport:
    """Welch z-scores of trace statistics of ``lhs^p`` against ``rhs``.

    ``lhs_sample`` may pass a precomputed :func:`lhs_angles` result for the
    same ``(lhs, samples, seed)``; the report is identical, only faster.
    """
    if samples < 1000:
        raise ValueError("at least 1000 samples are required")
    if kmax < 1:
        raise ValueError("kmax must be positive")
    if seed is None:
        seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    if lhs_sample is None:
        lhs_sample = lhs_angles(lhs, samples, seed, workers)
    elif lhs_sample.count != samples:
        raise ValueError("precomputed lhs sample has the wrong size")
    a = trace_statistics(power_angles(lhs_sample, p), kmax)
    b = trace_statistics(rhs_angles(rhs, samples, seed, workers), kmax)
    lines = []
    for i, name in enumerate(statistic_names(kmax)):
        ma, mb = float(a[:, i].mean()), float(b[:, i].mean())
        va, vb = float(a[:, i].var(ddof=1)), float(b[:, i].var(ddof=1))
        se = np.sqrt(va / samples + vb / samples)
        if se < 1e-12:
            lines.append(StatLine(name, ma, va, mb, vb, samples, None, bool(abs(ma - mb) < 1e-9)))
        else:
            lines.append(StatLine(name, ma, va, mb, vb, samples, float((ma - mb) / se)))
    return StatReport(str(lhs), p, rhs.render(show_trivial=False), samples, kmax, int(seed), tuple(lines))
