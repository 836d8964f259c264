"""Command-line entry point: ``mmp <subcommand> ...``.

Every subcommand reads and writes one diagram per line so that commands
compose in shell pipelines, e.g. ``mmp generate --blocks 5 --block-size 3
| mmp color --assert``.

Exit codes: 0 success, 1 negative verdict under ``--assert``, 2 usage or
input errors, 3 I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Iterable, Iterator
from multiprocessing import Pool

from . import __version__
from .canon import canonical_diagram
from .diagram import FORMAT_VERSION, MmpDiagram, ParseError, parse_mmp, serialize_mmp, validate
from .generator import FILTERS, GenerationParams, SearchBudgetExceeded, SearchStats, generate_all

SUBCOMMANDS = ("generate", "color", "states", "lattice", "realize", "verify", "canon", "validate")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _parse_budget(text: str | None) -> dict:
    out: dict = {}
    if not text:
        return out
    for part in text.split(","):
        key, _, value = part.partition("=")
        key = key.strip()
        try:
            if key == "nodes":
                out["max_nodes"] = int(value)
            elif key in ("seconds", "time"):
                out["time_limit"] = float(value)
            else:
                raise UsageError(f"unknown budget key {key!r} (use nodes=N,seconds=S)")
        except ValueError:
            raise UsageError(f"bad budget value {part!r}") from None
    return out


def _block_sizes(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"block size must be K or K..K2, got {text!r}") from None
    if not 2 <= a <= b:
        raise argparse.ArgumentTypeError("block sizes must satisfy 2 <= K <= K2")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--parallel", type=int, default=1, metavar="W", help="worker processes")
    common.add_argument("--budget", metavar="SPEC", help="search limits, e.g. nodes=100000,seconds=60")
    common.add_argument("--format", choices=("mmp", "numeric"), default="mmp", help="diagram output dialect")
    common.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 on a negative verdict")

    parser = argparse.ArgumentParser(prog="mmp", description="MMP diagram tools: generation, 0-1 states, lattices, vectors")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="isomorph-free generation")
    g.add_argument("--blocks", type=int, required=True)
    g.add_argument("--block-size", type=_block_sizes, required=True, metavar="K[..K2]")
    g.add_argument("--max-vertices", type=int)
    g.add_argument("--min-vertices", type=int, default=0)
    conn = g.add_mutually_exclusive_group()
    conn.add_argument("--connected", dest="connected", action="store_true", default=True)
    conn.add_argument("--disconnected", dest="connected", action="store_false", help="also emit disconnected diagrams")
    g.add_argument("--filter", action="append", default=[], choices=sorted(FILTERS))
    g.add_argument("--out", metavar="FILE")
    g.add_argument("--stats", action="store_true", help="print search statistics to stderr")

    c = sub.add_parser("color", parents=[common], help="0-1 colorability")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("--enumerate", action="store_true")
    c.add_argument("--limit", type=int)
    c.add_argument("--witness", action="store_true", help="append a 0-1 state")

    s = sub.add_parser("states", parents=[common], help="probabilistic and quantum state checks")
    s.add_argument("file", nargs="?", default="-")
    s.add_argument("--mode", choices=("exists", "quantum", "classify"), default="exists")

    lat = sub.add_parser("lattice", parents=[common], help="pasted-lattice checks")
    lat.add_argument("file", nargs="?", default="-")
    lat.add_argument("--check", action="append", default=[], choices=("orthomodular", "superposition", "minlength"))
    lat.add_argument("--eval", dest="eval_file", metavar="STATEMENTS_FILE")

    r = sub.add_parser("realize", parents=[common], help="exact vector realization")
    r.add_argument("file", nargs="?", default="-")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--retries", type=int, default=100)
    r.add_argument("--strategy", choices=("sample", "candidates"), default="sample")
    r.add_argument("--candidate-bound", type=int, default=1)

    v = sub.add_parser("verify", parents=[common], help="check a vector file against a diagram")
    v.add_argument("diagram_file")
    v.add_argument("vectors_file")

    k = sub.add_parser("canon", parents=[common], help="canonical form of each diagram")
    k.add_argument("file", nargs="?", default="-")

    val = sub.add_parser("validate", parents=[common], help="check the MMP conditions")
    val.add_argument("file", nargs="?", default="-")
    val.add_argument("--greechie", action="store_true", help="also warn about Greechie-style constraints")
    return parser


# ------------------------------------------------------------------ plumbing

def _open_lines(path: str, stdin) -> Iterator[str]:
    if path == "-":
        yield from stdin
        return
    with open(path, encoding="utf-8") as fh:
        yield from fh


def _diagrams(path: str, stdin, check: bool = True) -> Iterator[MmpDiagram]:
    """Parsed diagrams, one per non-comment line, validated unless ``check`` is off."""
    for lineno, line in enumerate(_open_lines(path, stdin), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            d = parse_mmp(s)
        except ParseError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
        if check:
            rep = validate(d)
            if not rep.passed:
                why = "; ".join(v.describe(d) for v in rep.violations)
                raise InputError(f"{path}:{lineno}: not a valid MMP diagram ({why})")
        yield d


def _fmt(d: MmpDiagram, args) -> str:
    return serialize_mmp(d, "numeric" if args.format == "numeric" else "auto")


def _map_diagrams(func, diagrams: Iterable[MmpDiagram], workers: int, extra=()) -> Iterator:
    """Apply ``func`` to each diagram, in input order, optionally in a pool."""
    if workers <= 1:
        for d in diagrams:
            yield func((d, *extra))
        return
    with Pool(workers) as pool:
        yield from pool.imap(func, ((d, *extra) for d in diagrams), chunksize=16)


# ---------------------------------------------------------------- commands

def _color_line(job):
    from .states import admits_01_state, count_01_states, enumerate_01_states

    d, enumerate_, limit, witness = job
    if enumerate_:
        if limit is None:
            k = count_01_states(d)
            trunc = False
        else:
            en = enumerate_01_states(d, limit)
            k, trunc = len(en), en.truncated
        if k:
            return True, f"COLORABLE {k}{'+' if trunc else ''}"
        return False, "NONCOLORABLE"
    res = admits_01_state(d)
    if res:
        return True, "COLORABLE" + (f" {res.witness.format(d)}" if witness else "")
    return False, "NONCOLORABLE"


def _states_line(job):
    from .states import admits_quantum_states, admits_state, classify_state_space

    d, mode = job
    if mode == "exists":
        f = admits_state(d)
        return (True, f"STATE {f.state.format(d)}") if f else (False, "NOSTATE")
    if mode == "quantum":
        q = admits_quantum_states(d)
        if q:
            note = f" unreachable={','.join(d.label(a) for a in q.unreachable)}" if q.unreachable else ""
            return True, "QUANTUM" + note
        if not q.has_states:
            return False, "NONQUANTUM nostate"
        a, b = q.failing_pair
        return False, f"NONQUANTUM {d.label(a)} {d.label(b)}"
    c = classify_state_space(d)
    yes = {True: "yes", False: "no"}
    parts = [f"any={yes[c.admits_any_state]}", f"01={yes[c.admits_01_state]}", f"quantum={yes[c.admits_quantum_states]}"]
    if c.unreachable_atoms:
        parts.append("unreachable=" + ",".join(d.label(a) for a in c.unreachable_atoms))
    if c.failing_pair:
        parts.append("failing=" + ",".join(d.label(a) for a in c.failing_pair))
    return c.admits_any_state and c.admits_quantum_states, " ".join(parts)


def cmd_generate(args, stdin, stdout, stderr) -> int:
    lo, hi = args.block_size
    try:
        p = GenerationParams(
            target_blocks=args.blocks,
            block_size_min=lo,
            block_size_max=hi,
            max_vertices=args.max_vertices,
            min_vertices=args.min_vertices,
            require_connected=args.connected,
            filters=tuple(args.filter),
            **_parse_budget(args.budget),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = open(args.out, "w", encoding="utf-8") if args.out else stdout
    stats = SearchStats()
    count = 0
    try:
        for d in generate_all(p, workers=args.parallel, stats=stats):
            out.write(_fmt(d, args) + "\n")
            count += 1
        out.flush()
    except SearchBudgetExceeded as exc:
        out.flush()
        print(f"mmp generate: {exc}", file=stderr)
        return 1
    finally:
        if args.out:
            out.close()
    if args.stats:
        print(
            f"# emitted={count} nodes={stats.nodes} accepted={stats.accepted_children} "
            f"rejected={stats.rejected_children} pruned={stats.pruned}",
            file=stderr,
        )
    return 1 if args.assert_ and count == 0 else 0


def _verdict_stream(results, stdout, assert_) -> int:
    negative = False
    for ok, text in results:
        stdout.write(text + "\n")
        stdout.flush()
        negative |= not ok
    return 1 if assert_ and negative else 0


def cmd_color(args, stdin, stdout, stderr) -> int:
    diagrams = _diagrams(args.file, stdin)
    extra = (args.enumerate, args.limit, args.witness)
    # under --assert a COLORABLE line is the negative verdict (hunting KS sets)
    results = ((not ok, text) for ok, text in _map_diagrams(_color_line, diagrams, args.parallel, extra))
    return _verdict_stream(results, stdout, args.assert_)


def cmd_states(args, stdin, stdout, stderr) -> int:
    diagrams = _diagrams(args.file, stdin)
    return _verdict_stream(_map_diagrams(_states_line, diagrams, args.parallel, (args.mode,)), stdout, args.assert_)


def cmd_canon(args, stdin, stdout, stderr) -> int:
    for d in _diagrams(args.file, stdin):
        stdout.write(_fmt(canonical_diagram(d), args) + "\n")
    stdout.flush()
    return 0


def cmd_validate(args, stdin, stdout, stderr) -> int:
    negative = False
    for lineno, line in enumerate(_open_lines(args.file, stdin), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            d = parse_mmp(s)
        except ParseError as exc:
            raise InputError(f"{args.file}:{lineno}: {exc}") from None
        rep = validate(d, greechie=args.greechie)
        text = "VALID" if rep.passed else "INVALID " + "; ".join(v.describe(d) for v in rep.violations)
        if rep.warnings:
            text += " warnings: " + "; ".join(w.describe(d) for w in rep.warnings)
        stdout.write(text + "\n")
        negative |= not rep.passed
    return 1 if args.assert_ and negative else 0


def cmd_lattice(args, stdin, stdout, stderr) -> int:
    from .equations import EvaluationBudgetExceeded, holds_in, read_statements
    from .lattice import LatticeConstructionError, build_lattice, check_minimal_length, check_orthomodular, check_superposition

    statements = []
    if args.eval_file:
        try:
            statements = read_statements(_open_lines(args.eval_file, stdin))
        except ParseError as exc:
            raise InputError(f"{args.eval_file}: {exc}") from None
    negative = False
    for d in _diagrams(args.file, stdin):
        try:
            lat = build_lattice(d)
        except LatticeConstructionError as exc:
            stdout.write(f"NOLATTICE {exc}\n")
            negative = True
            continue
        parts = [f"LATTICE elements={lat.element_count}"]
        for name in args.check:
            if name == "orthomodular":
                ok = bool(check_orthomodular(lat))
            elif name == "superposition":
                ok = bool(check_superposition(lat))
            else:
                ok = check_minimal_length(lat)
            negative |= not ok
            parts.append(f"{name}={'yes' if ok else 'no'}")
        stdout.write(" ".join(parts) + "\n")
        for st in statements:
            try:
                res = holds_in(lat, st)
            except EvaluationBudgetExceeded as exc:
                stdout.write(f"SKIPPED {st} ({exc})\n")
                negative = True
                continue
            if res:
                stdout.write(f"HOLDS {st}\n")
            else:
                stdout.write(f"FAILS {st} {res.describe(lat)}\n")
                negative = True
    stdout.flush()
    return 1 if args.assert_ and negative else 0


def cmd_realize(args, stdin, stdout, stderr) -> int:
    from .vectors import realize, serialize_vectors, verify_realization

    negative = False
    for d in _diagrams(args.file, stdin):
        try:
            res = realize(
                d, args.dim, seed=args.seed, retries=args.retries, strategy=args.strategy, candidate_bound=args.candidate_bound
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        stdout.write(f"# {serialize_mmp(d)}\n")
        if res.success and verify_realization(d, res.vectors).valid:
            stdout.write(f"# realized dim={args.dim} seed={res.seed} attempts={res.attempts}\n")
            stdout.write(serialize_vectors(res.vectors, d.labels))
        else:
            stdout.write(f"# {res.status} dim={args.dim} seed={res.seed} attempts={res.attempts} nodes={res.nodes}\n")
            negative = True
    stdout.flush()
    return 1 if args.assert_ and negative else 0


def cmd_verify(args, stdin, stdout, stderr) -> int:
    from .vectors import VectorFormatError, parse_vectors, verify_realization

    found = list(_diagrams(args.diagram_file, stdin))
    if len(found) != 1:
        raise InputError(f"{args.diagram_file}: expected exactly one diagram, found {len(found)}")
    d = found[0]
    try:
        vs = parse_vectors("".join(_open_lines(args.vectors_file, stdin)), d)
        rep = verify_realization(d, vs)
    except (VectorFormatError, KeyError, ValueError) as exc:
        raise InputError(f"{args.vectors_file}: {exc}") from None
    if rep.valid:
        stdout.write(f"VALID {rep.pairs_checked} pairs orthogonal\n")
        return 0
    for viol in rep.violations:
        stdout.write(f"INVALID block {viol.block} {viol.pair[0]} {viol.pair[1]} inner={viol.inner_product}\n")
    return 1 if args.assert_ else 0


COMMANDS = {
    "generate": cmd_generate,
    "color": cmd_color,
    "states": cmd_states,
    "lattice": cmd_lattice,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "canon": cmd_canon,
    "validate": cmd_validate,
}


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        old_out, old_err = sys.stdout, sys.stderr
        sys.stdout, sys.stderr = stdout, stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stdout, sys.stderr = old_out, old_err
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.parallel < 1:
        print("mmp: --parallel must be >= 1", file=stderr)
        return 2
    try:
        return COMMANDS[args.command](args, stdin, stdout, stderr)
    except (UsageError, InputError) as exc:
        print(f"mmp {args.command}: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"mmp {args.command}: {exc}", file=stderr)
        return 3


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
