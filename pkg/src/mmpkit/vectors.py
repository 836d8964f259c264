"""Exact real realizations of MMP diagrams as sets of orthogonal rays.

A realization assigns each vertex a nonzero rational vector so that
vertices sharing a block get orthogonal vectors.  Together with the absence
of a 0-1 state this certifies a Kochen-Specker set.
"""

from __future__ import annotations

import itertools
import random
import re
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import MmpDiagram
from .exact import dot, nullspace, primitive


class VectorFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True, eq=False)
class VectorSet:
    """Rational vectors of one dimension, keyed by vertex label."""

    dimension: int
    vectors: Mapping[str, tuple[Fraction, ...]]

    def __post_init__(self):
        vecs = {k: tuple(Fraction(x) for x in v) for k, v in self.vectors.items()}
        for label, vec in vecs.items():
            if len(vec) != self.dimension:
                raise VectorFormatError(f"vector {label} has {len(vec)} components, expected {self.dimension}")
            if not any(vec):
                raise VectorFormatError(f"vector {label} is zero")
        object.__setattr__(self, "vectors", vecs)

    def __eq__(self, other):
        return isinstance(other, VectorSet) and self.dimension == other.dimension and self.vectors == other.vectors

    def __getitem__(self, label: str) -> tuple[Fraction, ...]:
        return self.vectors[label]

    def scaled(self, label: str, factor) -> VectorSet:
        vecs = dict(self.vectors)
        vecs[label] = tuple(Fraction(factor) * x for x in vecs[label])
        return VectorSet(self.dimension, vecs)

    def max_entry_digits(self) -> int:
        return max((len(str(abs(x.numerator))) for v in self.vectors.values() for x in v), default=0)


_COMPONENT = re.compile(r"-?\d+(?:/\d+)?")


def parse_vectors(text: str, diagram: MmpDiagram | None = None) -> VectorSet:
    """Read ``label: c1 c2 ... cd`` lines (integers or ``p/q``).

    With ``diagram`` every label must name one of its vertices.
    """
    vecs: dict[str, tuple[Fraction, ...]] = {}
    dim = None
    known = set(diagram.labels) if diagram is not None else None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        label, sep, rest = s.partition(":")
        label = label.strip()
        if not sep or not label:
            raise VectorFormatError("expected 'label: components'", lineno)
        if known is not None and label not in known:
            raise VectorFormatError(f"unknown label {label!r}", lineno)
        if label in vecs:
            raise VectorFormatError(f"label {label!r} given twice", lineno)
        comps = rest.split()
        for c in comps:
            if not _COMPONENT.fullmatch(c):
                raise VectorFormatError(f"bad component {c!r}", lineno)
            if "/" in c and int(c.split("/")[1]) == 0:
                raise VectorFormatError(f"zero denominator in {c!r}", lineno)
        vec = tuple(Fraction(c) for c in comps)
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise VectorFormatError(f"ragged dimensions: {len(vec)} components, expected {dim}", lineno)
        if not any(vec):
            raise VectorFormatError(f"zero vector for {label!r}", lineno)
        vecs[label] = vec
    if dim is None:
        raise VectorFormatError("no vectors")
    return VectorSet(dim, vecs)


def serialize_vectors(v: VectorSet, order: Sequence[str] | None = None) -> str:
    labels = order if order is not None else list(v.vectors)
    return "".join(f"{lab}: {' '.join(str(x) for x in v.vectors[lab])}\n" for lab in labels)


# -------------------------------------------------------------- verification

@dataclass(frozen=True)
class OrthogonalityViolation:
    block: int
    pair: tuple[str, str]
    inner_product: Fraction


@dataclass(frozen=True)
class RealizationReport:
    violations: tuple[OrthogonalityViolation, ...]
    pairs_checked: int

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def verify_realization(d: MmpDiagram, v: VectorSet) -> RealizationReport:
    """Exact inner products of every pair of vertices sharing a block."""
    for b in d.blocks:
        if len(b) > v.dimension:
            raise ValueError(f"block of {len(b)} vertices cannot be orthogonal in dimension {v.dimension}")
    missing = [lab for lab in d.labels if lab not in v.vectors]
    if missing:
        raise KeyError(f"no vector for vertices {' '.join(missing)}")
    violations = []
    checked = 0
    for i, b in enumerate(d.blocks):
        for x, y in itertools.combinations(b, 2):
            lx, ly = d.label(x), d.label(y)
            ip = dot(v.vectors[lx], v.vectors[ly])
            checked += 1
            if ip != 0:
                violations.append(OrthogonalityViolation(i, (lx, ly), ip))
    return RealizationReport(tuple(violations), checked)


# ---------------------------------------------------------------- realizing

@dataclass(frozen=True)
class RealizationResult:
    """Outcome of :func:`realize`.

    ``status`` is ``"ok"``, ``"budget-exhausted"`` or
    ``"impossible-over-candidates"``; the last is only reported by the
    candidate strategy after exhausting its finite ray set.
    """

    status: str
    vectors: VectorSet | None
    seed: int
    attempts: int = 0
    nodes: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.status == "ok"

    def __bool__(self) -> bool:
        return self.success


def _vertex_order(d: MmpDiagram) -> list[int]:
    """Most-constrained-first order: next vertex has the most placed neighbours."""
    nbrs = d.neighbors()
    placed: list[int] = []
    count = [0] * d.vertex_count
    left = set(range(d.vertex_count))
    while left:
        v = max(left, key=lambda u: (count[u], -u))
        left.remove(v)
        placed.append(v)
        for u in nbrs[v]:
            count[u] += 1
    return placed


def _normalise(vec) -> tuple[int, ...]:
    p = primitive(vec)
    first = next(x for x in p if x != 0)
    return p if first > 0 else tuple(-x for x in p)


def _sample_attempt(d, dim, order, nbrs, rng, bound, per_vertex, node_cap, stats):
    vecs: dict[int, tuple[int, ...]] = {}
    used: set[tuple[int, ...]] = set()

    def place(pos):
        if pos == len(order):
            return True
        v = order[pos]
        rows = [vecs[u] for u in nbrs[v] if u in vecs]
        basis = nullspace(rows, dim)
        if not basis:
            return False
        for _ in range(per_vertex):
            stats["nodes"] += 1
            if stats["nodes"] > node_cap:
                return False
            coeffs = [0] * len(basis)
            while not any(coeffs):
                coeffs = [rng.randint(-bound, bound) for _ in basis]
            w = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(dim)]
            w = _normalise(w)
            if w in used:
                if len(basis) == 1:
                    return False
                continue
            vecs[v] = w
            used.add(w)
            if place(pos + 1):
                return True
            del vecs[v]
            used.discard(w)
        return False

    return vecs if place(0) else None


def _candidate_rays(dim: int, bound: int) -> list[tuple[int, ...]]:
    rays = set()
    for vec in itertools.product(range(-bound, bound + 1), repeat=dim):
        if any(vec):
            rays.add(_normalise(vec))
    return sorted(rays, key=lambda r: (sum(map(abs, r)), [-x for x in r]))


def _candidate_search(d, dim, order, nbrs, bound, max_nodes):
    rays = _candidate_rays(dim, bound)
    orth = [0] * len(rays)
    for i, j in itertools.combinations(range(len(rays)), 2):
        if sum(a * b for a, b in zip(rays[i], rays[j])) == 0:
            orth[i] |= 1 << j
            orth[j] |= 1 << i
    full = (1 << len(rays)) - 1
    chosen: dict[int, int] = {}
    nodes = 0

    class _Budget(Exception):
        pass

    def place(pos, used):
        nonlocal nodes
        if pos == len(order):
            return True
        v = order[pos]
        allowed = full & ~used
        for u in nbrs[v]:
            if u in chosen:
                allowed &= orth[chosen[u]]
        while allowed:
            low = allowed & -allowed
            r = low.bit_length() - 1
            allowed ^= low
            nodes += 1
            if nodes > max_nodes:
                raise _Budget
            chosen[v] = r
            if place(pos + 1, used | low):
                return True
            del chosen[v]
        return False

    try:
        ok = place(0, 0)
    except _Budget:
        return "budget-exhausted", None, nodes, len(rays)
    if ok:
        return "ok", {v: rays[r] for v, r in chosen.items()}, nodes, len(rays)
    return "impossible-over-candidates", None, nodes, len(rays)


def realize(
    d: MmpDiagram,
    dimension: int,
    seed: int = 0,
    retries: int = 100,
    strategy: str = "sample",
    coefficient_bound: int = 3,
    samples_per_vertex: int = 2,
    candidate_bound: int = 1,
    max_nodes: int = 1_000_000,
) -> RealizationResult:
    """Search for an exact real realization of ``d`` in ``dimension``.

    ``strategy="sample"`` places vertices most-constrained first; each new
    vector is a random small-integer combination of an exact null-space
    basis of its placed block neighbours.  Dead ends backtrack a bounded
    number of times per attempt, and ``retries`` fresh attempts continue the
    seeded random stream.  Failure is always ``"budget-exhausted"``.

    ``strategy="candidates"`` searches exhaustively over the finite set of
    rays with integer entries in ``[-candidate_bound, candidate_bound]``
    and can therefore report ``"impossible-over-candidates"``.
    """
    if dimension < 1:
        raise ValueError("dimension must be positive")
    for b in d.blocks:
        if len(b) > dimension:
            raise ValueError(f"a block of {len(b)} vertices does not fit in dimension {dimension}")
    order = _vertex_order(d)
    nbrs = d.neighbors()
    labels = d.labels
    if strategy == "candidates":
        status, found, nodes, nrays = _candidate_search(d, dimension, order, nbrs, candidate_bound, max_nodes)
        vs = VectorSet(dimension, {labels[v]: found[v] for v in range(d.vertex_count)}) if found else None
        return RealizationResult(status, vs, seed, attempts=1, nodes=nodes, detail={"candidate_rays": nrays})
    if strategy != "sample":
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    stats = {"nodes": 0}
    node_cap = max(50, 20 * d.vertex_count)
    for attempt in range(1, retries + 1):
        stats["nodes"] = 0
        found = _sample_attempt(d, dimension, order, nbrs, rng, coefficient_bound, samples_per_vertex, node_cap, stats)
        if found is not None:
            vs = VectorSet(dimension, {labels[v]: found[v] for v in range(d.vertex_count)})
            return RealizationResult("ok", vs, seed, attempts=attempt, nodes=stats["nodes"])
    return RealizationResult("budget-exhausted", None, seed, attempts=retries, nodes=stats["nodes"])


def _realize_job(args):
    d, dimension, seed, kwargs = args
    return realize(d, dimension, seed, **kwargs)


def realize_first(d: MmpDiagram, dimension: int, seeds: Sequence[int], workers: int = 2, **kwargs) -> RealizationResult:
    """Try several seeds in parallel; the lowest successful seed wins.

    The winner is reproducible by calling :func:`realize` with its seed.
    """
    with ProcessPoolExecutor(workers) as pool:
        last = None
        for res in pool.map(_realize_job, [(d, dimension, s, kwargs) for s in seeds]):
            if res.success:
                return res
            last = res
    return last
