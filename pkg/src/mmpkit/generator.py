"""Isomorph-free generation of MMP diagrams by canonical augmentation.

The search grows diagrams one block at a time.  From each diagram it tries
one representative of every orbit of one-block extensions under the
diagram's automorphism group, and descends into a child only when the
added block is the child's canonical last block: among the blocks whose
removal leaves the diagram valid without splitting a component, the one
picked by an isomorphism-invariant score and, on ties, the largest
canonical position.  Every isomorphism class is therefore reached along
exactly one path.
"""

from __future__ import annotations

import itertools
import time
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .canon import canonical_positions, symmetry
from .diagram import MmpDiagram, validate


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, reason: str, stats: SearchStats):
        super().__init__(f"search budget exceeded ({reason}): {stats.nodes} nodes, {stats.emitted} emitted")
        self.reason = reason
        self.stats = stats


@dataclass
class SearchStats:
    nodes: int = 0
    emitted: int = 0
    accepted_children: int = 0
    rejected_children: int = 0
    pruned: int = 0
    started: float = field(default_factory=time.monotonic)


@dataclass(frozen=True)
class DiagramFilter:
    name: str
    predicate: Callable[[MmpDiagram], bool]
    # hereditary: if a diagram fails, every diagram containing it fails too
    monotone: bool = False


def _non_colorable(d):
    from .states import admits_01_state

    return not admits_01_state(d)


def _colorable(d):
    from .states import admits_01_state

    return bool(admits_01_state(d))


def _stateless(d):
    from .states import state_exists

    return not state_exists(d)


def _has_state(d):
    from .states import state_exists

    return state_exists(d)


FILTERS = {
    "non-01-colorable": DiagramFilter("non-01-colorable", _non_colorable),
    "stateless": DiagramFilter("stateless", _stateless),
    "01-colorable": DiagramFilter("01-colorable", _colorable, monotone=True),
    "has-state": DiagramFilter("has-state", _has_state, monotone=True),
}


@dataclass(frozen=True)
class GenerationParams:
    target_blocks: int
    block_size_min: int = 3
    block_size_max: int | None = None
    max_vertices: int | None = None
    min_vertices: int = 0
    require_connected: bool = True
    filters: tuple[str, ...] = ()
    prune_monotone: bool = True
    max_nodes: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.block_size_max is None:
            object.__setattr__(self, "block_size_max", self.block_size_min)
        if self.max_vertices is None:
            object.__setattr__(self, "max_vertices", self.target_blocks * self.block_size_max)
        object.__setattr__(self, "filters", tuple(self.filters))
        if self.target_blocks < 1:
            raise ValueError("target_blocks must be >= 1")
        if not 2 <= self.block_size_min <= self.block_size_max:
            raise ValueError("need 2 <= block_size_min <= block_size_max")
        if self.min_vertices > self.max_vertices:
            raise ValueError("min_vertices exceeds max_vertices")
        for name in self.filters:
            if name not in FILTERS:
                raise ValueError(f"unknown filter {name!r}; choose from {', '.join(FILTERS)}")

    def filter_objects(self) -> list[DiagramFilter]:
        return [FILTERS[name] for name in self.filters]


@dataclass(frozen=True)
class Extension:
    """A new block for ``parent``; indices >= parent.vertex_count are fresh vertices."""

    parent: MmpDiagram
    new_block: tuple[int, ...]

    @property
    def fresh(self) -> int:
        return sum(1 for v in self.new_block if v >= self.parent.vertex_count)

    def child(self) -> MmpDiagram:
        return self.parent.add_block(self.new_block, self.fresh)


def _subset_orbits(candidates: list[tuple[int, ...]], generators) -> list[tuple[int, ...]]:
    """First member (in input order) of each orbit of the candidate subsets."""
    if not generators:
        return candidates
    seen: set[frozenset[int]] = set()
    reps = []
    for cand in candidates:
        key = frozenset(cand)
        if key in seen:
            continue
        reps.append(cand)
        seen.add(key)
        stack = [key]
        while stack:
            s = stack.pop()
            for g in generators:
                img = frozenset(g[v] for v in s)
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
    return reps


def extensions(d: MmpDiagram, p: GenerationParams) -> list[Extension]:
    """One extension per automorphism orbit of admissible one-block additions."""
    n = d.vertex_count
    sizes = [len(b) for b in d.blocks]
    vblocks = d.vertex_blocks()
    existing = set(d.block_sets())
    # vertices whose blocks all have >= 3 vertices may be shared by a new block
    shareable = [v for v in range(n) if all(sizes[i] >= 3 for i in vblocks[v])]
    gens = symmetry(d).generators if n else ()
    out = []
    for k in range(p.block_size_min, p.block_size_max + 1):
        for s in range(0, min(k, n) + 1):
            fresh = k - s
            if n + fresh > p.max_vertices:
                continue
            if s == 0 and p.require_connected and n > 0:
                continue
            if s > 0 and k < 3:
                continue
            cands = [S for S in itertools.combinations(shareable, s) if fresh or frozenset(S) not in existing]
            for S in _subset_orbits(cands, gens):
                out.append(Extension(d, S + tuple(range(n, n + fresh))))
    return out


def _removable_blocks(d: MmpDiagram) -> list[int]:
    base = d.component_count()
    return [i for i in range(len(d.blocks)) if d.component_count(skip_block=i) <= base]


def _block_score(d: MmpDiagram, i: int, degrees: list[int]) -> tuple:
    b = d.blocks[i]
    return (len(b), tuple(sorted(degrees[v] for v in b)))


def canonical_last_block(d: MmpDiagram) -> tuple[int, list[int]]:
    """Chosen block index and the indices of blocks in its automorphism orbit."""
    cands = _removable_blocks(d)
    degrees = d.degrees()
    scores = {i: _block_score(d, i, degrees) for i in cands}
    top = max(scores.values())
    best = [i for i in cands if scores[i] == top]
    if len(best) == 1:
        return best[0], best
    _, bpos = canonical_positions(d)
    chosen = max(best, key=lambda i: bpos[i])
    orbits = symmetry(d).block_orbits
    return chosen, [i for i in best if orbits[i] == orbits[chosen]]


def is_canonical_extension(child: MmpDiagram, e: Extension | None = None, block_index: int | None = None) -> bool:
    """Whether the block added by ``e`` (the child's last block) is its canonical last block."""
    if block_index is None:
        block_index = len(child.blocks) - 1
    cands = _removable_blocks(child)
    if block_index not in cands:
        return False
    degrees = child.degrees()
    mine = _block_score(child, block_index, degrees)
    scores = [_block_score(child, i, degrees) for i in cands]
    top = max(scores)
    if mine != top:
        return False
    best = [i for i, sc in zip(cands, scores) if sc == top]
    if len(best) == 1:
        return True
    _, bpos = canonical_positions(child)
    chosen = max(best, key=lambda i: bpos[i])
    if chosen == block_index:
        return True
    orbits = symmetry(child).block_orbits
    return orbits[chosen] == orbits[block_index]


class _Search:
    def __init__(self, p: GenerationParams, stats: SearchStats | None = None):
        self.p = p
        self.stats = stats or SearchStats()
        self.filters = p.filter_objects()
        self.pruners = [f for f in self.filters if f.monotone] if p.prune_monotone else []

    def _tick(self):
        st = self.stats
        st.nodes += 1
        if self.p.max_nodes is not None and st.nodes > self.p.max_nodes:
            raise SearchBudgetExceeded("node limit", st)
        if self.p.time_limit is not None and time.monotonic() - st.started > self.p.time_limit:
            raise SearchBudgetExceeded("time limit", st)

    def children(self, d: MmpDiagram) -> Iterator[MmpDiagram]:
        p = self.p
        for e in extensions(d, p):
            child = e.child()
            # each later block brings at most block_size_max new vertices
            if child.vertex_count + (p.target_blocks - len(child.blocks)) * p.block_size_max < p.min_vertices:
                continue
            if is_canonical_extension(child, e):
                self.stats.accepted_children += 1
                if self.pruners and not all(f.predicate(child) for f in self.pruners):
                    self.stats.pruned += 1
                    continue
                yield child
            else:
                self.stats.rejected_children += 1

    def walk(self, d: MmpDiagram) -> Iterator[MmpDiagram]:
        self._tick()
        if len(d.blocks) == self.p.target_blocks:
            if all(f.predicate(d) for f in self.filters):
                self.stats.emitted += 1
                yield d
            return
        for child in self.children(d):
            yield from self.walk(child)

    def frontier(self, d: MmpDiagram, depth: int) -> Iterator[MmpDiagram]:
        """Nodes at ``depth`` blocks (or finished diagrams above it) in search order."""
        if len(d.blocks) >= depth or len(d.blocks) == self.p.target_blocks:
            yield d
            return
        self._tick()
        for child in self.children(d):
            yield from self.frontier(child, depth)


def scan(d: MmpDiagram, p: GenerationParams, emit: Callable[[MmpDiagram], object]) -> int:
    """Emit every isomorphism class with ``p.target_blocks`` blocks reachable from ``d``."""
    if len(d.blocks) > p.target_blocks:
        raise ValueError("starting diagram already has more blocks than the target")
    if d.blocks and not validate(d):
        raise ValueError("starting diagram is not a valid MMP diagram")
    count = 0
    for out in _Search(p).walk(d):
        emit(out)
        count += 1
    return count


def _walk_subtree(args) -> list[MmpDiagram]:
    d, p = args
    return list(_Search(p).walk(d))


def generate_all(p: GenerationParams, workers: int = 1, stats: SearchStats | None = None) -> Iterator[MmpDiagram]:
    """Stream all diagrams for ``p`` from the empty diagram.

    With ``workers > 1`` the subtrees below a shallow frontier are searched
    in separate processes; results are still yielded in sequential order.
    Node and time budgets then apply per subtree.
    """
    search = _Search(p, stats)
    root = MmpDiagram.empty()
    if workers <= 1:
        yield from search.walk(root)
        return
    depth = min(2, p.target_blocks)
    nodes = list(search.frontier(root, depth))
    with ProcessPoolExecutor(workers) as pool:
        for batch in pool.map(_walk_subtree, [(d, p) for d in nodes]):
            search.stats.emitted += len(batch)
            yield from batch
