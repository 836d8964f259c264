"""Independent brute-force oracles used to freeze expected values.

Nothing here touches nauty, the canonical-augmentation search or the
simplex code; each function is a direct enumeration of its definition.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from mmpkit.diagram import MmpDiagram


def brute_isomorphic(d1: MmpDiagram, d2: MmpDiagram) -> bool:
    """Search vertex bijections mapping the block set of d1 onto that of d2."""
    n = d1.vertex_count
    if n != d2.vertex_count or len(d1.blocks) != len(d2.blocks):
        return False
    target = {frozenset(b) for b in d2.blocks}
    if len(target) != len({frozenset(b) for b in d1.blocks}):
        return False
    deg1, deg2 = d1.degrees(), d2.degrees()
    if sorted(deg1) != sorted(deg2):
        return False
    blocks1 = [frozenset(b) for b in d1.blocks]
    perm = [-1] * n
    used = [False] * n

    def consistent(upto: int) -> bool:
        # every block of d1 fully mapped so far must land on a block of d2
        mapped = set(range(upto + 1))
        for b in blocks1:
            if b <= mapped and frozenset(perm[v] for v in b) not in target:
                return False
        return True

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if not used[w] and deg1[v] == deg2[w]:
                perm[v] = w
                used[w] = True
                if consistent(v) and extend(v + 1):
                    return True
                used[w] = False
        perm[v] = -1
        return False

    return extend(0)


def brute_automorphism_count(d: MmpDiagram) -> int:
    """Count vertex permutations preserving the block set (partial maps pruned)."""
    n = d.vertex_count
    target = {frozenset(b) for b in d.blocks}
    blocks = [frozenset(b) for b in d.blocks]
    deg = d.degrees()
    perm = [-1] * n
    used = [False] * n

    def count(v: int) -> int:
        if v == n:
            return 1
        total = 0
        mapped = set(range(v + 1))
        for w in range(n):
            if used[w] or deg[v] != deg[w]:
                continue
            perm[v] = w
            if all(not b <= mapped or frozenset(perm[u] for u in b) in target for b in blocks):
                used[w] = True
                total += count(v + 1)
                used[w] = False
        perm[v] = -1
        return total

    return count(0)


def is_valid_mmp(blocks: list[frozenset[int]], n: int) -> bool:
    covered = set().union(*blocks) if blocks else set()
    if covered != set(range(n)):
        return False
    if n >= 2 and any(len(b) < 2 for b in blocks):
        return False
    for i, b in enumerate(blocks):
        if len(b) < 3 and any(b & c for j, c in enumerate(blocks) if j != i):
            return False
    return len(set(blocks)) == len(blocks)


def is_connected(blocks: list[frozenset[int]]) -> bool:
    if not blocks:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j, c in enumerate(blocks):
            if j not in seen and blocks[i] & c:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(blocks)


def brute_classes(max_vertices: int, nblocks: int, size: int, connected: bool) -> list[MmpDiagram]:
    """All MMP diagrams with ``nblocks`` blocks of ``size`` on at most
    ``max_vertices`` vertices, one per isomorphism class.

    Enumerates every set of distinct blocks over ``range(n)`` covering all n
    vertices (the first block pinned to ``{0..size-1}``, which loses no
    class), then deduplicates with :func:`brute_isomorphic`.
    """
    reps: dict[tuple, list[MmpDiagram]] = {}
    for n in range(size, max_vertices + 1):
        first = frozenset(range(size))
        pool = [frozenset(c) for c in itertools.combinations(range(n), size) if frozenset(c) != first]
        for rest in itertools.combinations(pool, nblocks - 1):
            blocks = [first, *rest]
            if not is_valid_mmp(blocks, n):
                continue
            if connected and not is_connected(blocks):
                continue
            d = MmpDiagram(n, tuple(tuple(sorted(b)) for b in blocks))
            key = (n, tuple(sorted(d.degrees())))
            bucket = reps.setdefault(key, [])
            if not any(brute_isomorphic(d, r) for r in bucket):
                bucket.append(d)
    return [d for bucket in reps.values() for d in bucket]


def brute_01_states(d: MmpDiagram) -> list[tuple[int, ...]]:
    """Every 0/1 assignment with exactly one 1 per block, via all 2^n masks."""
    n = d.vertex_count
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(masks.shape, dtype=bool)
    for b in d.blocks:
        bm = sum(1 << v for v in b)
        x = masks & bm
        # exactly one bit set: x != 0 and x & (x - 1) == 0
        ok &= (x != 0) & ((x & (x - 1)) == 0)
    return [tuple((int(m) >> v) & 1 for v in range(n)) for m in masks[ok]]


def pasting_classes(d: MmpDiagram) -> list[frozenset[tuple[int, frozenset[int]]]]:
    """Element classes of the pasted lattice computed by naive fixpoint closure.

    Starts from singleton classes of (block, subset) pairs and repeatedly
    merges any two classes that share a subset or whose complements meet,
    until nothing changes.
    """
    items = []
    for i, b in enumerate(d.blocks):
        bs = frozenset(b)
        for r in range(len(b) + 1):
            for s in itertools.combinations(sorted(b), r):
                items.append((i, frozenset(s)))
    classes = [{it} for it in items]

    def comp(it):
        i, s = it
        return (i, frozenset(d.blocks[i]) - s)

    changed = True
    while changed:
        changed = False
        for x, y in itertools.combinations(range(len(classes)), 2):
            cx, cy = classes[x], classes[y]
            same_set = {s for _, s in cx} & {s for _, s in cy}
            full = any(s == frozenset(d.blocks[i]) for i, s in cx) and any(s == frozenset(d.blocks[i]) for i, s in cy)
            comps_x = {comp(a) for a in cx}
            comps_y = {comp(a) for a in cy}
            comps_meet = any(cz & comps_x and cz & comps_y for cz in classes)
            if same_set or full or comps_meet:
                classes[x] = cx | cy
                del classes[y]
                changed = True
                break
    return [frozenset(c) for c in classes]


def float_lp_min(A, b, c):
    """Minimum of c.x over A x = b, x >= 0 with scipy's HiGHS (None if infeasible)."""
    from scipy.optimize import linprog

    res = linprog(c, A_eq=np.array(A, dtype=float), b_eq=np.array(b, dtype=float), bounds=(0, None), method="highs")
    if res.status == 2:
        return None
    assert res.status == 0, res.message
    return res.fun


def fractions_equal(xs, ys) -> bool:
    return all(Fraction(x) == Fraction(y) for x, y in zip(xs, ys))


def diagram_from_sets(sets) -> MmpDiagram | None:
    """Compact a list of vertex sets into a diagram, or None if it is not valid MMP."""
    blocks = []
    for s in sets:
        fs = frozenset(s)
        if fs and fs not in blocks:
            blocks.append(fs)
    if not blocks:
        return None
    used = sorted(set().union(*blocks))
    pos = {v: i for i, v in enumerate(used)}
    n = len(used)
    compact = [frozenset(pos[v] for v in b) for b in blocks]
    if not is_valid_mmp(compact, n):
        return None
    return MmpDiagram(n, tuple(tuple(sorted(b)) for b in compact))


def random_diagram(rng, max_vertices: int = 12, sizes=(3, 4), max_blocks: int = 9) -> MmpDiagram:
    """Random valid diagram on at most ``max_vertices`` vertices."""
    while True:
        n = rng.randint(3, max_vertices)
        nb = rng.randint(1, max_blocks)
        sets = [rng.sample(range(n), min(n, rng.choice(sizes))) for _ in range(nb)]
        d = diagram_from_sets(sets)
        if d is not None:
            return d
