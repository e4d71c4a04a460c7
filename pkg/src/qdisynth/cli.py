"""Command-line entry point: ``qdisynth {synth,analyze,table1,simulate,fixture,verify}``.

Exit codes: 0 clean, 1 gate orphans (or a failed property) found, 2 usage,
parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import analysis, netlist, sim, synth
from .logic import MAX_INPUTS, BooleanFunction, Codeword, ParseError, Spacer, all_codewords, parse_truth_table

EXIT_OK, EXIT_ORPHANS, EXIT_USAGE = 0, 1, 2

TRUTH_TABLE_HELP = (
    "truth-table file: first line 'n=<k>', second line 2^k characters of 0/1; "
    "character i is f at the assignment whose binary value (Xn..X1) is i"
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def load_netlist(path: str) -> netlist.Netlist:
    try:
        nl = netlist.parse_netlist(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    diags = netlist.validate(nl)
    if diags:
        raise UsageError(f"{path}: invalid netlist\n" + "\n".join(f"  {d}" for d in diags))
    return nl


def cmd_synth(args) -> int:
    try:
        f = parse_truth_table(_read(args.function))
    except ParseError as exc:
        raise UsageError(f"{args.function}: {exc}") from None
    try:
        nl = synth.synthesize(f, args.method, or_fanin=args.or_fanin)
    except synth.SynthesisError as exc:
        raise UsageError(f"synthesis rejected: {exc}") from None
    _write(args.output, netlist.render_netlist(nl))
    report = analysis.estimate_cost(nl)
    summary = f"method: {args.method}\n" + report.render()
    (sys.stderr if args.output in (None, "-") else sys.stdout).write(summary)
    return EXIT_OK


def analyze_netlist(nl: netlist.Netlist, mode: str, fmt: str, phase: str, exhaustive: bool) -> tuple[str, int]:
    """Render the requested report; returns ``(text, exit_code)``."""
    out, doc, code = [], {}, EXIT_OK
    if mode in ("orphans", "all"):
        table = analysis.orphan_summary(nl)
        if table.orphan_rows():
            code = EXIT_ORPHANS
        phases = (sim.SET, sim.RESET) if phase == "both" else (phase,)
        for ph in phases:
            out.append(analysis.render_orphan_table(table, ph))
        doc["orphans"] = analysis.orphan_table_dict(table)
    if mode in ("indication", "all"):
        ind = analysis.classify_indication(nl, exhaustive=exhaustive)
        out.append(
            f"indication: {ind.io_class} (early set: {'yes' if ind.early_set else 'no'}, "
            f"early reset: {'yes' if ind.early_reset else 'no'}, witnesses: {len(ind.witnesses)})\n"
        )
        doc["indication"] = ind.to_dict()
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", code
    return "\n".join(out), code


def cmd_analyze(args) -> int:
    nl = load_netlist(args.netlist)
    try:
        text, code = analyze_netlist(nl, args.mode, args.format, args.phase, args.exhaustive)
    except analysis.EnumerationLimitError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(text)
    return code


def cmd_table1(args) -> int:
    sys.stdout.write(analysis.render_table1(args.phase, args.format))
    return EXIT_OK


def parse_stimulus(nl: netlist.Netlist, text: str, rails: bool):
    if rails:
        try:
            return sim.parse_rails(nl, text)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if text == "spacer":
        return Spacer
    if text and set(text) == {"-"}:
        if len(text) != nl.n:
            raise UsageError(f"spacer string must have {nl.n} characters")
        return Spacer
    try:
        cw = Codeword.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cw.n != nl.n:
        raise UsageError(f"codeword {text!r} has {cw.n} variables, netlist has {nl.n}")
    return cw


def cmd_simulate(args) -> int:
    nl = load_netlist(args.netlist)
    stim = parse_stimulus(nl, args.codeword, args.rails)
    try:
        if isinstance(stim, frozenset):
            traces = sim.simulate_rails(nl, stim)
        else:
            traces = sim.simulate_transaction(nl, stim)
    except sim.SimulationError as exc:
        sys.stderr.write(f"simulation failed: {exc}\n")
        return EXIT_ORPHANS
    if args.format == "json":
        doc = {t.phase: [e.to_dict() for e in t.events] for t in traces}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("".join(t.dump() for t in traces))
    return EXIT_OK


def cmd_fixture(args) -> int:
    _write(args.output, netlist.render_netlist(netlist.build_fixture(args.name, args.or_fanin)))
    return EXIT_OK


def verify_population(n: int, samples: int | None, seed: int) -> list[BooleanFunction]:
    """Every non-constant function of ``n`` inputs, or a seeded sample of them."""
    size = 1 << (1 << n)
    if samples is None:
        tables = range(1, size - 1)
    else:
        rng = random.Random(seed)
        tables = [rng.randrange(1, size - 1) for _ in range(samples)]
    return [BooleanFunction.from_int(n, t) for t in tables]


def cmd_verify(args) -> int:
    """Check orphan freedom and oracle agreement over a function population."""
    funcs = verify_population(args.n, args.samples, args.seed)
    failures = 0
    for f in funcs:
        for method in ("dims", "safe"):
            nl = synth.synthesize(f, method)
            for cw in all_codewords(f.n):
                if netlist.eval_netlist(nl, cw)[0] != (f(cw.value), 1 - f(cw.value)):
                    failures += 1
                    sys.stdout.write(f"{method} {f.to_text().split()[1]} {cw}: wrong value\n")
            table = analysis.orphan_summary(nl)
            for row in table.orphan_rows():
                failures += 1
                sys.stdout.write(f"{method} {f.to_text().split()[1]} {row.codeword}: orphans\n")
    sys.stdout.write(f"checked {len(funcs)} functions of {args.n} inputs (seed {args.seed}): "
                     f"{failures} failures\n")
    return EXIT_OK if not failures else EXIT_ORPHANS


def _fanin(text: str) -> int:
    k = int(text)
    if k < 2:
        raise argparse.ArgumentTypeError("fan-in cap must be at least 2")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdisynth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a dual-rail netlist", description=TRUTH_TABLE_HELP)
    s.add_argument("function", help="truth-table file ('-' for stdin)")
    s.add_argument("--method", choices=sorted(synth.METHODS), default="dims")
    s.add_argument("--or-fanin", type=_fanin, default=None, help="build output ORs as trees of this fan-in")
    s.add_argument("-o", "--output", help="netlist file (default stdout)")
    s.set_defaults(func=cmd_synth)

    a = sub.add_parser("analyze", help="gate-orphan and indication reports")
    a.add_argument("netlist")
    a.add_argument("--mode", choices=("orphans", "indication", "all"), default="all")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--phase", choices=("set", "reset", "both"), default="both")
    a.add_argument("--exhaustive", action="store_true", help="try every input subset when classifying")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table1", help="three-circuit orphan table for the 3-input AND")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.add_argument("--phase", choices=("set", "reset"), default="set")
    t.set_defaults(func=cmd_table1)

    m = sub.add_parser("simulate", help="trace one 4-phase transaction")
    m.add_argument("netlist")
    m.add_argument("codeword", help="assignment over Xn..X1 such as 110; '---' or 'spacer' for the spacer")
    m.add_argument("--rails", action="store_true", help="codeword is a rail list such as X30,X20,X11")
    m.add_argument("--format", choices=("text", "json"), default="text")
    m.set_defaults(func=cmd_simulate)

    x = sub.add_parser("fixture", help="write a built-in 3-input AND circuit")
    x.add_argument("name", choices=sorted(netlist.FIXTURES))
    x.add_argument("--or-fanin", type=_fanin, default=None)
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_fixture)

    v = sub.add_parser("verify", help="property run: DIMS and safe netlists are orphan-free")
    v.add_argument("--n", type=int, default=3, choices=range(1, min(MAX_INPUTS, 6) + 1))
    v.add_argument("--samples", type=int, default=None, help="random functions instead of all")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["simulate"]:
        # a spacer codeword such as '---' would otherwise parse as an option;
        # a bare '--' keeps its separator meaning unless it is the last token
        argv = [
            f"={a}" if set(a) == {"-"} and (len(a) >= 3 or (a == "--" and i == len(argv) - 1)) else a
            for i, a in enumerate(argv)
        ]
    args = build_parser().parse_args(argv)
    if getattr(args, "codeword", "").startswith("="):
        args.codeword = args.codeword[1:]
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"qdisynth: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
