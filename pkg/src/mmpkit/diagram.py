"""MMP diagrams: blocks of mutually orthogonal atoms, their text format and validation.

A diagram line lists blocks as runs of vertex labels separated by commas and
terminated by a period, e.g. ``abc,cde,efa,egb,dgf.``.  Labels come from the
ordered 62-character alphabet ``a-z A-Z 1-9 0``.  Larger diagrams use the
numeric dialect where each block is a space-separated list of 1-based
integers: ``1 2 3,3 4 5.``.
"""

from __future__ import annotations

import itertools
import re
import string
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

ALPHABET = string.ascii_lowercase + string.ascii_uppercase + "123456789" + "0"
_LABEL_INDEX = {ch: i for i, ch in enumerate(ALPHABET)}

#: version of the MMP text dialect understood by this package
FORMAT_VERSION = "mmp-1"


class ParseError(ValueError):
    """Malformed input text; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def default_labels(n: int) -> tuple[str, ...]:
    if n <= len(ALPHABET):
        return tuple(ALPHABET[:n])
    return tuple(str(i + 1) for i in range(n))


@dataclass(frozen=True)
class MmpDiagram:
    """Vertex count plus an ordered list of blocks (0-based vertex indices).

    The constructor enforces only the structural invariants (indices in
    range, no repeated vertex inside a block).  The three MMP conditions are
    checked by :func:`validate`, so invalid diagrams can still be built for
    diagnostics and test fixtures.
    """

    vertex_count: int
    blocks: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=(), compare=True)

    def __post_init__(self):
        blocks = tuple(tuple(int(v) for v in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for i, b in enumerate(blocks):
            for v in b:
                if not 0 <= v < self.vertex_count:
                    raise ValueError(f"block {i} references vertex {v} outside 0..{self.vertex_count - 1}")
            if len(set(b)) != len(b):
                raise ValueError(f"block {i} repeats a vertex")
        labels = tuple(self.labels) if self.labels else default_labels(self.vertex_count)
        if len(labels) != self.vertex_count:
            raise ValueError("labels must name every vertex")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], vertex_count: int | None = None) -> MmpDiagram:
        blocks = tuple(tuple(b) for b in blocks)
        if vertex_count is None:
            vertex_count = 1 + max((v for b in blocks for v in b), default=-1)
        return cls(vertex_count, blocks)

    @classmethod
    def empty(cls) -> MmpDiagram:
        return cls(0, ())

    def __str__(self) -> str:
        return serialize_mmp(self)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def label(self, v: int) -> str:
        return self.labels[v]

    def vertex_blocks(self) -> list[list[int]]:
        """For each vertex, the indices of the blocks containing it."""
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, b in enumerate(self.blocks):
            for v in b:
                out[v].append(i)
        return out

    def degrees(self) -> list[int]:
        return [len(bs) for bs in self.vertex_blocks()]

    def neighbors(self) -> list[set[int]]:
        """Vertices sharing at least one block with each vertex."""
        out: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for b in self.blocks:
            for u in b:
                out[u].update(b)
        for u in range(self.vertex_count):
            out[u].discard(u)
        return out

    def block_sets(self) -> list[frozenset[int]]:
        return [frozenset(b) for b in self.blocks]

    def component_count(self, skip_block: int | None = None) -> int:
        """Connected components of the block-intersection structure.

        With ``skip_block`` the count is taken after removing that block and
        any vertex that belonged only to it.
        """
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        used = set()
        for i, b in enumerate(self.blocks):
            if i == skip_block or not b:
                continue
            used.update(b)
            r = find(b[0])
            for v in b[1:]:
                parent[find(v)] = r
        return len({find(v) for v in used})

    def is_connected(self) -> bool:
        return self.component_count() <= 1

    def add_block(self, block: Sequence[int], fresh: int = 0) -> MmpDiagram:
        """Append ``block``; it may refer to ``fresh`` new vertices numbered after the existing ones."""
        n = self.vertex_count + fresh
        labels = self.labels + default_labels(n)[self.vertex_count:] if fresh else self.labels
        if len(set(labels)) != len(labels):
            labels = ()
        return MmpDiagram(n, self.blocks + (tuple(block),), labels)

    def remove_block(self, index: int) -> tuple[MmpDiagram, list[int | None]]:
        """Drop a block and the vertices only it contained.

        Returns the smaller diagram and the map old vertex -> new vertex
        (``None`` for removed vertices).
        """
        keep = [b for i, b in enumerate(self.blocks) if i != index]
        alive = sorted({v for b in keep for v in b})
        mapping: list[int | None] = [None] * self.vertex_count
        for new, old in enumerate(alive):
            mapping[old] = new
        blocks = tuple(tuple(mapping[v] for v in b) for b in keep)
        labels = tuple(self.labels[v] for v in alive)
        return MmpDiagram(len(alive), blocks, labels), mapping

    def relabel(self, perm: Sequence[int]) -> MmpDiagram:
        """Rename vertex ``v`` to ``perm[v]``; labels follow their vertices."""
        labels = [""] * self.vertex_count
        for v, p in enumerate(perm):
            labels[p] = self.labels[v]
        return MmpDiagram(self.vertex_count, tuple(tuple(perm[v] for v in b) for b in self.blocks), tuple(labels))


# ---------------------------------------------------------------- text format

def parse_mmp(text: str, numeric: bool | None = None) -> MmpDiagram:
    """Parse one diagram line.

    Vertices are numbered by first appearance and keep their labels.  The
    numeric dialect is detected by a space inside the diagram body unless
    ``numeric`` is given explicitly.
    """
    end = text.find(".")
    if end < 0:
        raise ParseError("missing terminating period", len(text))
    tail = text[end + 1:]
    if tail.strip():
        raise ParseError("unexpected text after period", end + 1 + (len(tail) - len(tail.lstrip())))
    body = text[:end]
    if numeric is None:
        numeric = " " in body
    if body == "":
        return MmpDiagram.empty()
    if numeric:
        raw = _parse_numeric_body(body)
    else:
        raw = _parse_char_body(body)
    index: dict[str, int] = {}
    blocks = []
    for labels in raw:
        blocks.append(tuple(index.setdefault(lab, len(index)) for lab in labels))
    return MmpDiagram(len(index), tuple(blocks), tuple(index))


def _parse_char_body(body: str) -> list[list[str]]:
    blocks: list[list[str]] = []
    current: list[str] = []
    for pos, ch in enumerate(body):
        if ch == ",":
            if not current:
                raise ParseError("empty block", pos)
            blocks.append(current)
            current = []
        elif ch in _LABEL_INDEX:
            if ch in current:
                raise ParseError(f"vertex {ch!r} repeated in block", pos)
            current.append(ch)
        else:
            raise ParseError(f"unknown character {ch!r}", pos)
    if not current:
        raise ParseError("empty block", len(body))
    blocks.append(current)
    return blocks


_NUM_TOKEN = re.compile(r"[^ ,]+|,")


def _parse_numeric_body(body: str) -> list[list[str]]:
    blocks: list[list[str]] = []
    current: list[str] = []
    for m in _NUM_TOKEN.finditer(body):
        tok, pos = m.group(), m.start()
        if tok == ",":
            if not current:
                raise ParseError("empty block", pos)
            blocks.append(current)
            current = []
            continue
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(f"bad vertex number {tok!r}", pos)
        tok = str(int(tok))
        if tok in current:
            raise ParseError(f"vertex {tok} repeated in block", pos)
        current.append(tok)
    if not current:
        raise ParseError("empty block", len(body))
    blocks.append(current)
    return blocks


def serialize_mmp(d: MmpDiagram, fmt: str = "auto") -> str:
    """Render ``d`` as one diagram line (without newline).

    ``fmt`` is ``"auto"`` (character labels when they fit, numeric
    otherwise), ``"char"`` or ``"numeric"``.
    """
    if fmt not in ("auto", "char", "numeric"):
        raise ValueError(f"unknown format {fmt!r}")
    char_ok = d.vertex_count <= len(ALPHABET)
    if fmt == "char" and not char_ok:
        raise ValueError("more than 62 vertices need the numeric format")
    if fmt == "numeric" or not char_ok:
        if all(lab.isdigit() and lab[0] != "0" for lab in d.labels):
            names = d.labels
        else:
            names = tuple(str(i + 1) for i in range(d.vertex_count))
        return ",".join(" ".join(names[v] for v in b) for b in d.blocks) + "."
    if all(len(lab) == 1 and lab in _LABEL_INDEX for lab in d.labels):
        names = d.labels
    else:
        names = default_labels(d.vertex_count)
    return ",".join("".join(names[v] for v in b) for b in d.blocks) + "."


def read_diagrams(lines: Iterable[str], numeric: bool | None = None) -> Iterator[MmpDiagram]:
    """Parse a stream of lines, skipping blank lines and ``#`` comments."""
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield parse_mmp(line.rstrip("\r\n").lstrip(), numeric=numeric)


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    condition: str
    vertices: tuple[int, ...] = ()
    blocks: tuple[int, ...] = ()

    def describe(self, d: MmpDiagram | None = None) -> str:
        names = [d.label(v) for v in self.vertices] if d is not None else list(self.vertices)
        parts = [f"condition {self.condition}"]
        if self.vertices:
            parts.append("vertices " + " ".join(map(str, names)))
        if self.blocks:
            parts.append("blocks " + " ".join(map(str, self.blocks)))
        return ": ".join([parts[0], ", ".join(parts[1:])]) if len(parts) > 1 else parts[0]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    warnings: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def validate(d: MmpDiagram, greechie: bool = False) -> ValidationReport:
    """Check the three MMP conditions and report every violation.

    1. every vertex lies in at least one block;
    2. with at least two vertices, every block has at least two vertices;
    3. a block meeting another block has at least three vertices.

    Repeated blocks are rejected under the id ``"duplicate"``.  With
    ``greechie=True`` the Greechie-style constraints (blocks meet in at most
    one vertex, no loops of order 3 or 4) are reported as warnings.
    """
    violations: list[Violation] = []
    vb = d.vertex_blocks()
    for v, bs in enumerate(vb):
        if not bs:
            violations.append(Violation("1", vertices=(v,)))
    if d.vertex_count >= 2:
        for i, b in enumerate(d.blocks):
            if len(b) < 2:
                violations.append(Violation("2", vertices=b, blocks=(i,)))
    sets = d.block_sets()
    for i, b in enumerate(sets):
        if len(b) >= 3:
            continue
        touching = [j for j in range(len(sets)) if j != i and b & sets[j]]
        if touching:
            violations.append(Violation("3", vertices=tuple(sorted(b)), blocks=(i, *touching)))
    seen: dict[frozenset[int], int] = {}
    for i, b in enumerate(sets):
        if b in seen:
            violations.append(Violation("duplicate", vertices=tuple(sorted(b)), blocks=(seen[b], i)))
        else:
            seen[b] = i
    warnings = _greechie_warnings(sets) if greechie else []
    return ValidationReport(tuple(violations), tuple(warnings))


def _greechie_warnings(sets: list[frozenset[int]]) -> list[Violation]:
    out: list[Violation] = []
    nb = len(sets)
    meets = {}
    for i, j in itertools.combinations(range(nb), 2):
        common = sets[i] & sets[j]
        if common:
            meets[i, j] = meets[j, i] = common
        if len(common) >= 2:
            out.append(Violation("greechie-loop-2", vertices=tuple(sorted(common)), blocks=(i, j)))
    for i, j, k in itertools.combinations(range(nb), 3):
        if (i, j) in meets and (j, k) in meets and (i, k) in meets and not (sets[i] & sets[j] & sets[k]):
            out.append(Violation("greechie-loop-3", blocks=(i, j, k)))
    for quad in itertools.combinations(range(nb), 4):
        if any(sets[a] & sets[b] & sets[c] for a, b, c in itertools.combinations(quad, 3)):
            continue
        first = quad[0]
        for rest in itertools.permutations(quad[1:]):
            if rest[0] > rest[2]:
                continue  # each 4-cycle once
            cyc = (first, *rest)
            if all((cyc[t], cyc[(t + 1) % 4]) in meets for t in range(4)):
                out.append(Violation("greechie-loop-4", blocks=cyc))
    return out
