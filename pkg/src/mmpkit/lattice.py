"""Finite ortholattices pasted from the Boolean blocks of an MMP diagram.

Each block of k atoms contributes the 2^k subsets of its atoms.  Subsets
that are literally the same set of atoms are identified across blocks, all
empty subsets are 0, all full blocks are 1, and identification is closed
under complementation inside blocks.  The order is subset inclusion within
blocks, closed transitively.  Lattice and orthomodularity properties are
then checked, not assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class LatticeConstructionError(ValueError):
    """The pasting does not give an orthomodular lattice.

    ``kind`` is one of ``"not a lattice"``, ``"order not antisymmetric"``,
    ``"orthocomplement ill-defined"``, ``"atoms identified"`` or
    ``"not orthomodular"``; ``witness`` names the offending elements.
    """

    def __init__(self, kind: str, witness: tuple, detail: str = ""):
        super().__init__(f"{kind}: {detail or witness}")
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True, eq=False)
class OmlLattice:
    """Finite ortholattice given by its operation tables.

    ``members[x]`` lists the (block index, atom set) pairs identified as
    element ``x``; ``names[x]`` is a readable name.
    """

    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    ortho: np.ndarray
    zero: int
    one: int
    atom_of_vertex: tuple[int, ...]
    names: tuple[str, ...]
    members: tuple[tuple[tuple[int, frozenset[int]], ...], ...] = ()

    @property
    def element_count(self) -> int:
        return len(self.ortho)

    def atoms(self) -> list[int]:
        """Elements covering 0."""
        z = self.zero
        return [x for x in range(self.element_count) if x != z and int(self.leq[:, x].sum()) == 2]

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)


def _subsets(block: tuple[int, ...]):
    for r in range(len(block) + 1):
        for s in itertools.combinations(block, r):
            yield frozenset(s)


def build_lattice(d, check: bool = True) -> OmlLattice:
    """Paste the block Boolean algebras of ``d`` into one ortholattice.

    Raises :class:`LatticeConstructionError` when the identification
    collapses elements, when least upper bounds fail to exist, or (with
    ``check``) when the orthomodular law fails.
    """
    items: list[tuple[int, frozenset[int]]] = []
    index: dict[tuple[int, frozenset[int]], int] = {}
    for i, b in enumerate(d.blocks):
        for s in _subsets(b):
            index[i, s] = len(items)
            items.append((i, s))
    parent = list(range(len(items)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[max(rx, ry)] = min(rx, ry)
        return True

    by_set: dict[frozenset[int], list[int]] = {}
    for k, (_, s) in enumerate(items):
        by_set.setdefault(s, []).append(k)
    for ks in by_set.values():
        for k in ks[1:]:
            union(ks[0], k)
    fulls = [index[i, frozenset(b)] for i, b in enumerate(d.blocks)]
    for k in fulls[1:]:
        union(fulls[0], k)
    blocksets = [frozenset(b) for b in d.blocks]
    comp = [index[i, blocksets[i] - s] for i, s in items]
    changed = True
    while changed:
        changed = False
        groups: dict[int, list[int]] = {}
        for k in range(len(items)):
            groups.setdefault(find(k), []).append(k)
        for ks in groups.values():
            first = comp[ks[0]]
            for k in ks[1:]:
                changed |= union(first, comp[k])

    roots = sorted({find(k) for k in range(len(items))})
    cls = {r: e for e, r in enumerate(roots)}
    elem = [cls[find(k)] for k in range(len(items))]
    count = len(roots)
    members: list[list[tuple[int, frozenset[int]]]] = [[] for _ in range(count)]
    for k, it in enumerate(items):
        members[elem[k]].append(it)

    for x, ms in enumerate(members):
        per_block: dict[int, frozenset[int]] = {}
        for i, s in ms:
            if i in per_block and per_block[i] != s:
                raise LatticeConstructionError(
                    "orthocomplement ill-defined", (x,), f"block {i} subsets {sorted(per_block[i])} and {sorted(s)} identified"
                )
            per_block[i] = s

    if not items:
        raise LatticeConstructionError("not a lattice", (), "diagram has no blocks")
    zero = elem[index[0, frozenset()]]
    one = elem[fulls[0]]
    atom_of_vertex = []
    for v, bs in enumerate(d.vertex_blocks()):
        if not bs:
            raise LatticeConstructionError("not a lattice", (v,), f"vertex {d.label(v)} lies in no block")
        atom_of_vertex.append(elem[index[bs[0], frozenset((v,))]])
    if len(set(atom_of_vertex)) != len(atom_of_vertex):
        seen: dict[int, int] = {}
        for v, a in enumerate(atom_of_vertex):
            if a in seen:
                raise LatticeConstructionError(
                    "atoms identified", (seen[a], v), f"vertices {d.label(seen[a])} and {d.label(v)} collapse"
                )
            seen[a] = v

    ortho = np.array([elem[comp[index[members[x][0]]]] for x in range(count)], dtype=np.int32)

    # order: subset inclusion inside blocks, transitively closed with bitsets
    up = [1 << x for x in range(count)]
    for i, b in enumerate(d.blocks):
        subs = list(_subsets(b))
        for s in subs:
            xs = elem[index[i, s]]
            for t in subs:
                if s < t:
                    up[xs] |= 1 << elem[index[i, t]]
    for k in range(count):
        bit = 1 << k
        uk = up[k]
        for x in range(count):
            if up[x] & bit:
                up[x] |= uk
    down = [0] * count
    for x in range(count):
        for y in range(count):
            if up[x] >> y & 1:
                down[y] |= 1 << x
    for x in range(count):
        both = up[x] & down[x] & ~(1 << x)
        if both:
            y = both.bit_length() - 1
            raise LatticeConstructionError("order not antisymmetric", (x, y))

    leq = np.zeros((count, count), dtype=bool)
    for x in range(count):
        for y in range(count):
            leq[x, y] = bool(up[x] >> y & 1)
    by_up = {m: x for x, m in enumerate(up)}
    by_down = {m: x for x, m in enumerate(down)}
    names = tuple(_element_name(d, ms, x == zero, x == one) for x, ms in enumerate(members))
    join = np.zeros((count, count), dtype=np.int32)
    meet = np.zeros((count, count), dtype=np.int32)
    for x in range(count):
        for y in range(x, count):
            j = by_up.get(up[x] & up[y])
            m = by_down.get(down[x] & down[y])
            if j is None:
                mins = _minimal(up[x] & up[y], up)
                raise LatticeConstructionError(
                    "not a lattice",
                    (x, y, *mins),
                    f"{names[x]} and {names[y]} have minimal upper bounds " + ", ".join(names[z] for z in mins),
                )
            if m is None:
                maxs = _minimal(down[x] & down[y], down)
                raise LatticeConstructionError(
                    "not a lattice",
                    (x, y, *maxs),
                    f"{names[x]} and {names[y]} have maximal lower bounds " + ", ".join(names[z] for z in maxs),
                )
            join[x, y] = join[y, x] = j
            meet[x, y] = meet[y, x] = m

    lat = OmlLattice(
        leq=leq,
        meet=meet,
        join=join,
        ortho=ortho,
        zero=zero,
        one=one,
        atom_of_vertex=tuple(atom_of_vertex),
        names=names,
        members=tuple(tuple(ms) for ms in members),
    )
    bad = check_ortholattice(lat)
    if bad is not None:
        raise LatticeConstructionError("orthocomplement ill-defined", bad)
    if check:
        om = check_orthomodular(lat)
        if not om:
            raise LatticeConstructionError("not orthomodular", om.witness)
    return lat


def _minimal(mask: int, up: list[int]) -> list[int]:
    """Elements of ``mask`` with nothing else of ``mask`` strictly below them."""
    elems = [z for z in range(mask.bit_length()) if mask >> z & 1]
    return [z for z in elems if not any(w != z and up[w] >> z & 1 for w in elems)]


def _element_name(d, ms, is_zero: bool, is_one: bool) -> str:
    if is_zero:
        return "0"
    if is_one:
        return "1"
    _, s = min(ms, key=lambda m: (len(m[1]), sorted(m[1])))
    return " v ".join(d.label(v) for v in sorted(s))


def check_ortholattice(l: OmlLattice) -> tuple[int, ...] | None:
    """First element (or pair) breaking an ortholattice law, else None."""
    o = l.ortho
    n = l.element_count
    for x in range(n):
        if o[o[x]] != x or l.meet[x, o[x]] != l.zero or l.join[x, o[x]] != l.one:
            return (x,)
    xs, ys = np.nonzero(l.leq)
    bad = ~l.leq[o[ys], o[xs]]
    if bad.any():
        k = int(np.argmax(bad))
        return (int(xs[k]), int(ys[k]))
    return None


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: tuple = ()
    clause: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_orthomodular(l: OmlLattice) -> CheckResult:
    """x <= y implies y = x v (x' ^ y), over all pairs."""
    xs, ys = np.nonzero(l.leq)
    rhs = l.join[xs, l.meet[l.ortho[xs], ys]]
    bad = rhs != ys
    if bad.any():
        k = int(np.argmax(bad))
        return CheckResult(False, (int(xs[k]), int(ys[k])))
    return CheckResult(True)


def check_superposition(l: OmlLattice) -> CheckResult:
    """Both superposition clauses over atoms.

    1. distinct atoms a, b have a third atom c <= a v b;
    2. if c is a superposition of a and b then a is one of b and c.
    """
    atoms = l.atoms()
    below = {x: [c for c in atoms if l.leq[c, x]] for x in set(int(l.join[a, b]) for a in atoms for b in atoms)}
    for a, b in itertools.permutations(atoms, 2):
        j = int(l.join[a, b])
        if not any(c != a and c != b for c in below[j]):
            return CheckResult(False, (a, b), clause=1)
    for a, b in itertools.permutations(atoms, 2):
        j = int(l.join[a, b])
        for c in below[j]:
            if c in (a, b):
                continue
            if not l.leq[a, l.join[b, c]]:
                return CheckResult(False, (a, b, c), clause=2)
    return CheckResult(True)


def longest_chain(l: OmlLattice) -> int:
    """Number of covering steps in a longest chain from 0 to 1."""
    n = l.element_count
    strict = l.leq & ~np.eye(n, dtype=bool)
    order = sorted(range(n), key=lambda x: int(l.leq[:, x].sum()))
    height = [0] * n
    for y in order:
        preds = np.nonzero(strict[:, y])[0]
        if len(preds):
            height[y] = 1 + max(height[p] for p in preds)
    return height[l.one]


def check_minimal_length(l: OmlLattice) -> bool:
    """Whether some chain 0 < a < b < c < 1 exists."""
    return longest_chain(l) >= 4


def lattice_state_value(l: OmlLattice, atom_values, x: int):
    """m(x) for the lattice state induced by atom values (block sums)."""
    _, s = l.members[x][0]
    return sum((atom_values[v] for v in s), 0) if s else 0


def admits_lattice_quantum_states(l: OmlLattice, d) -> CheckResult:
    """Quantum state-set condition over all lattice elements.

    For each pair x, y with x not <= y, some state must give m(x) = 1 and
    m(y) < 1.  States are the block-sum states of ``d`` extended additively
    along block subsets.  Pairs where no state reaches m(x) = 1 hold
    vacuously.  The failing pair is returned as the witness.
    """
    from .exact import solve_lp
    from .states import block_matrix

    base = block_matrix(d)
    n = d.vertex_count
    rows = []
    for x in range(l.element_count):
        _, s = l.members[x][0]
        rows.append([1 if v in s else 0 for v in range(n)])
    for x in range(l.element_count):
        A = base + [rows[x]]
        rhs = [1] * (len(base) + 1)
        if not solve_lp(A, rhs).feasible:
            continue
        for y in range(l.element_count):
            if l.leq[x, y]:
                continue
            res = solve_lp(A, rhs, rows[y])
            if res.value >= 1:
                return CheckResult(False, (x, y))
    return CheckResult(True)
