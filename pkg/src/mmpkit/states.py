"""States on MMP diagrams.

A 0-1 state puts exactly one 1 in every block (no two orthogonal atoms both
1, not all atoms of a block 0).  A probabilistic state assigns rationals in
[0, 1] summing to 1 over every block.  The quantum condition asks, for every
ordered pair of distinct atoms ``a, b``, for a state with ``m(a) = 1`` and
``m(b) < 1``.

All verdicts are exact: 0-1 states by complete backtracking, probabilistic
ones by the rational simplex in :mod:`mmpkit.exact`.
"""

from __future__ import annotations

from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import MmpDiagram
from .exact import LPResult, solve_lp


@dataclass(frozen=True)
class ZeroOneState:
    values: tuple[int, ...]

    @property
    def ones(self) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.values) if x)

    def is_valid_for(self, d: MmpDiagram) -> bool:
        return all(sum(self.values[v] for v in b) == 1 for b in d.blocks)

    def as_probabilistic(self) -> ProbabilisticState:
        return ProbabilisticState(tuple(Fraction(x) for x in self.values))

    def format(self, d: MmpDiagram) -> str:
        return " ".join(f"{d.label(v)}:{x}" for v, x in enumerate(self.values))


@dataclass(frozen=True)
class ProbabilisticState:
    values: tuple[Fraction, ...]

    def is_valid_for(self, d: MmpDiagram) -> bool:
        return all(0 <= x <= 1 for x in self.values) and all(
            sum((self.values[v] for v in b), Fraction(0)) == 1 for b in d.blocks
        )

    def as_zero_one(self) -> ZeroOneState | None:
        if all(x in (0, 1) for x in self.values):
            return ZeroOneState(tuple(int(x) for x in self.values))
        return None

    def format(self, d: MmpDiagram) -> str:
        return " ".join(f"{d.label(v)}:{x}" for v, x in enumerate(self.values))


# ----------------------------------------------------------------- 0-1 states

@dataclass(frozen=True)
class ColoringResult:
    """Verdict of :func:`admits_01_state`.

    When ``colorable`` is false the search was exhaustive; ``nodes`` counts
    the branching decisions it took.
    """

    colorable: bool
    witness: ZeroOneState | None
    nodes: int

    def __bool__(self) -> bool:
        return self.colorable


def _exact_covers(d: MmpDiagram, stats: list[int]) -> Iterator[tuple[int, ...]]:
    # Choosing a 1 for a vertex covers its blocks and zeroes every other
    # vertex in them; the block with fewest live vertices branches next, so
    # a block with one live vertex is forced and an empty one fails at once.
    vblocks = d.vertex_blocks()
    live: dict[int, set[int]] = {i: set(b) for i, b in enumerate(d.blocks)}
    chosen: list[int] = []

    def select(v):
        removed = []
        for bi in vblocks[v]:
            for u in live[bi]:
                for bj in vblocks[u]:
                    if bj != bi and bj in live:
                        live[bj].discard(u)
            removed.append((bi, live.pop(bi)))
        return removed

    def deselect(removed):
        for bi, members in reversed(removed):
            live[bi] = members
            for u in members:
                for bj in vblocks[u]:
                    if bj != bi and bj in live:
                        live[bj].add(u)

    def search():
        if not live:
            yield tuple(chosen)
            return
        bi = min(live, key=lambda k: (len(live[k]), k))
        for v in sorted(live[bi]):
            stats[0] += 1
            removed = select(v)
            chosen.append(v)
            yield from search()
            chosen.pop()
            deselect(removed)

    yield from search()


def _state_from_ones(n: int, ones) -> ZeroOneState:
    vals = [0] * n
    for v in ones:
        vals[v] = 1
    return ZeroOneState(tuple(vals))


def admits_01_state(d: MmpDiagram) -> ColoringResult:
    stats = [0]
    for ones in _exact_covers(d, stats):
        return ColoringResult(True, _state_from_ones(d.vertex_count, ones), stats[0])
    return ColoringResult(False, None, stats[0])


@dataclass(frozen=True)
class StateEnumeration:
    states: tuple[ZeroOneState, ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.states)


def enumerate_01_states(d: MmpDiagram, limit: int | None = None) -> StateEnumeration:
    """All 0-1 states, stopping after ``limit`` with ``truncated`` set."""
    out = []
    for ones in _exact_covers(d, [0]):
        if limit is not None and len(out) >= limit:
            return StateEnumeration(tuple(out), True)
        out.append(_state_from_ones(d.vertex_count, ones))
    return StateEnumeration(tuple(out), False)


def count_01_states(d: MmpDiagram) -> int:
    return sum(1 for _ in _exact_covers(d, [0]))


# -------------------------------------------------------- probabilistic states

def block_matrix(d: MmpDiagram) -> list[list[int]]:
    rows = []
    for b in d.blocks:
        row = [0] * d.vertex_count
        for v in b:
            row[v] = 1
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Feasibility:
    """Existence of a probabilistic state.

    ``certificate`` (when infeasible) weights the blocks so that every
    vertex's total weight is <= 0 while the weights sum to > 0; summing the
    block equations with those weights gives a contradiction.
    """

    feasible: bool
    state: ProbabilisticState | None
    certificate: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.feasible


def admits_state(d: MmpDiagram) -> Feasibility:
    """Decide whether the block-sum system has a nonnegative solution.

    The returned state maximises the smallest atom value, so a single block
    of size k comes back uniform (1/k each).
    """
    n = d.vertex_count
    # x_v = t + s_v with t, s_v >= 0; maximise t
    A = [[len(b)] + row for b, row in zip(d.blocks, block_matrix(d))]
    res = solve_lp(A, [1] * len(d.blocks), [-1] + [0] * n)
    if res.status == "infeasible":
        return Feasibility(False, None, res.farkas)
    t = res.x[0]
    return Feasibility(True, ProbabilisticState(tuple(t + s for s in res.x[1:])))


def state_exists(d: MmpDiagram) -> bool:
    """Cheaper yes/no form of :func:`admits_state`: any 0-1 state settles it."""
    if admits_01_state(d):
        return True
    return solve_lp(block_matrix(d), [1] * len(d.blocks)).feasible


def verify_stateless_certificate(d: MmpDiagram, y) -> bool:
    from .exact import check_farkas

    return len(y) == len(d.blocks) and check_farkas(block_matrix(d), [1] * len(d.blocks), y)


@dataclass(frozen=True)
class QuantumResult:
    """Verdict of :func:`admits_quantum_states`.

    ``failing_pair`` is an ordered pair ``(a, b)`` for which every state with
    ``m(a) = 1`` also has ``m(b) = 1``.  ``unreachable`` lists atoms that no
    state sets to 1; their pairs hold vacuously.
    """

    holds: bool
    failing_pair: tuple[int, int] | None = None
    unreachable: tuple[int, ...] = ()
    has_states: bool = True

    def __bool__(self) -> bool:
        return self.holds


def _pinned(d: MmpDiagram, a: int) -> tuple[list[list[int]], list[int]]:
    A = block_matrix(d)
    pin = [0] * d.vertex_count
    pin[a] = 1
    return A + [pin], [1] * len(d.blocks) + [1]


def min_value_given_one(d: MmpDiagram, a: int, b: int) -> LPResult:
    """Minimise m(b) over states with m(a) = 1."""
    A, rhs = _pinned(d, a)
    cost = [0] * d.vertex_count
    cost[b] = 1
    return solve_lp(A, rhs, cost)


def _check_atom(d: MmpDiagram, a: int) -> tuple[bool, int | None]:
    """(reachable, first b failing) for a fixed first atom ``a``."""
    A, rhs = _pinned(d, a)
    if not solve_lp(A, rhs).feasible:
        return False, None
    nbrs = d.neighbors()[a]
    for b in range(d.vertex_count):
        if b == a or b in nbrs:
            continue  # m(a) = 1 forces m(b) = 0 inside a shared block
        res = min_value_given_one(d, a, b)
        if res.value >= 1:
            return True, b
    return True, None


def _check_atom_job(args):
    return _check_atom(*args)


def admits_quantum_states(d: MmpDiagram, workers: int = 1) -> QuantumResult:
    """Exact per-pair check of the quantum state-set condition on atoms.

    Distinct atoms are incomparable, so the condition reduces to: for every
    ordered pair ``(a, b)`` some state has ``m(a) = 1`` and ``m(b) < 1``.
    The strict inequality is decided exactly by minimising ``m(b)`` subject
    to ``m(a) = 1``.  A diagram with no states at all fails, since the
    condition concerns a nonempty set of states.
    """
    if not admits_state(d):
        return QuantumResult(False, has_states=False)
    atoms = range(d.vertex_count)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_atom_job, [(d, a) for a in atoms]))
    else:
        results = [_check_atom(d, a) for a in atoms]
    unreachable = tuple(a for a, (ok, _) in zip(atoms, results) if not ok)
    for a, (_, bad) in zip(atoms, results):
        if bad is not None:
            return QuantumResult(False, (a, bad), unreachable)
    return QuantumResult(True, None, unreachable)


@dataclass(frozen=True)
class StateClassification:
    admits_any_state: bool
    admits_01_state: bool
    admits_quantum_states: bool
    state_witness: ProbabilisticState | None = None
    zero_one_witness: ZeroOneState | None = None
    failing_pair: tuple[int, int] | None = None
    unreachable_atoms: tuple[int, ...] = field(default=())

    @property
    def has_unreachable_atoms(self) -> bool:
        return bool(self.unreachable_atoms)


def classify_state_space(d: MmpDiagram, workers: int = 1) -> StateClassification:
    feas = admits_state(d)
    col = admits_01_state(d)
    q = admits_quantum_states(d, workers=workers) if feas else QuantumResult(False, has_states=False)
    return StateClassification(
        admits_any_state=feas.feasible,
        admits_01_state=col.colorable,
        admits_quantum_states=q.holds,
        state_witness=feas.state,
        zero_one_witness=col.witness,
        failing_pair=q.failing_pair,
        unreachable_atoms=q.unreachable,
    )
