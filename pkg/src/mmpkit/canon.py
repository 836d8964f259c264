"""Canonical labeling and automorphisms of MMP diagrams.

A diagram is encoded as its bipartite vertex/block incidence graph with the
two sides in separate color classes, and nauty (through ``pynauty``)
supplies the canonical labeling and the automorphism group.
"""

from __future__ import annotations

from dataclasses import dataclass

import pynauty

from .diagram import MmpDiagram, serialize_mmp


@dataclass(frozen=True)
class CanonicalForm:
    canonical_text: str
    automorphism_count: int


@dataclass(frozen=True)
class Symmetry:
    """Automorphism data of a diagram.

    ``generators`` act on vertices only; ``vertex_orbits`` and
    ``block_orbits`` give, for each vertex/block, the smallest index in its
    orbit (block orbits are numbered in block index space).
    """

    generators: tuple[tuple[int, ...], ...]
    vertex_orbits: tuple[int, ...]
    block_orbits: tuple[int, ...]
    order: int


def _graph(d: MmpDiagram) -> pynauty.Graph:
    n = d.vertex_count
    adjacency = {n + i: list(b) for i, b in enumerate(d.blocks) if b}
    coloring = [set(range(n))]
    if d.blocks:
        coloring.append(set(range(n, n + len(d.blocks))))
    return pynauty.Graph(n + len(d.blocks), directed=False, adjacency_dict=adjacency, vertex_coloring=coloring)


def _group_order(mantissa: float, exponent: int, generators) -> int:
    approx = mantissa * 10.0 ** exponent
    if approx < 2.0 ** 50:
        return int(round(approx))
    # beyond double precision: compute the order exactly from the generators
    from sympy.combinatorics import Permutation, PermutationGroup

    return int(PermutationGroup([Permutation(list(g)) for g in generators]).order())


def symmetry(d: MmpDiagram) -> Symmetry:
    n, nb = d.vertex_count, len(d.blocks)
    if n + nb == 0:
        return Symmetry((), (), (), 1)
    gens, mant, expo, orbits, _ = pynauty.autgrp(_graph(d))
    vgens = tuple(tuple(g[:n]) for g in gens)
    full = [tuple(g) for g in gens]
    order = _group_order(mant, expo, full) if full else 1
    return Symmetry(
        generators=vgens,
        vertex_orbits=tuple(orbits[:n]),
        block_orbits=tuple(o - n for o in orbits[n:]),
        order=order,
    )


def canonical_positions(d: MmpDiagram) -> tuple[list[int], list[int]]:
    """Canonical index of each vertex and of each block."""
    n, nb = d.vertex_count, len(d.blocks)
    if n + nb == 0:
        return [], []
    lab = pynauty.canon_label(_graph(d))
    vpos = [0] * n
    bpos = [0] * nb
    for pos, node in enumerate(lab):
        if node < n:
            vpos[node] = pos
        else:
            bpos[node - n] = pos - n
    return vpos, bpos


def canonical_diagram(d: MmpDiagram) -> MmpDiagram:
    """Isomorphism-invariant representative of ``d`` with default labels.

    Blocks are sorted, vertices renumbered by first appearance in the sorted
    block list, then everything sorted once more.
    """
    vpos, _ = canonical_positions(d)
    blocks = sorted(tuple(sorted(vpos[v] for v in b)) for b in d.blocks)
    order: dict[int, int] = {}
    for b in blocks:
        for v in b:
            order.setdefault(v, len(order))
    blocks = sorted(tuple(sorted(order[v] for v in b)) for b in blocks)
    return MmpDiagram(d.vertex_count, tuple(blocks))


def canonical_form(d: MmpDiagram) -> CanonicalForm:
    return CanonicalForm(serialize_mmp(canonical_diagram(d)), symmetry(d).order)


def canonical_text(d: MmpDiagram) -> str:
    return serialize_mmp(canonical_diagram(d))


def are_isomorphic(d1: MmpDiagram, d2: MmpDiagram) -> bool:
    if d1.vertex_count != d2.vertex_count or len(d1.blocks) != len(d2.blocks):
        return False
    if sorted(map(len, d1.blocks)) != sorted(map(len, d2.blocks)):
        return False
    return canonical_text(d1) == canonical_text(d2)
