"""Command-line driver for the library.

One binary with subcommands: evaluate the explicit configuration, run
the property suite, search windows, decompose lamps against subgroup
descriptors, render windows as DOT, and emit reference tables. Flag
values override a JSON config file, which overrides built-in defaults.

Exit codes: 0 success; 1 property or consistency failure; 2 usage or
parse error; 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from .aperiodicity import (
    DescriptorError,
    SubgroupDescriptor,
    certificate_to_json,
    certify,
    check_certificate,
    decompose,
    make_sum_kernel,
    transfer_generators,
)
from .balls import BallSizeError, ball, generating_set
from .elements import Elem, ElementSyntaxError, elem_key, format_element, parse_element
from .engine import SearchLimits, complete_search, invariant_search, outcome_to_json
from .groups import FiniteGroupTable, GroupSpecError, parse_group_spec
from .patterns import PartialConfig, config_from_json
from .render import render_dot
from .subshift import (
    allowed_patterns,
    conformist_spec,
    forbidden_patterns,
    horizontal_coord,
    sample_sigma0,
    sigma0,
)
from .verify import run_verification
from .words import digit_one_parity, substitution_iterates

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_DEFAULTS = {
    "lambda_spec": "cyclic:3",
    "genset": "lamp-t",
    "seed": 0,
    "node_cap": 10**8,
    "workers": 1,
    "cases": 10**4,
    "count": 17,
    "iterations": 3,
    "hint": None,  # resolved per search mode
    "radius": None,  # resolved per subcommand
    "format": None,  # resolved per subcommand
    "out": None,
    "subgroup": None,
    "labels": None,
}

_RADIUS_DEFAULTS = {"sigma0": 2, "verify": 5, "search": 3, "render": 2}
_FORMAT_DEFAULTS = {
    "sigma0": "text",
    "verify": "json",
    "search": "json",
    "decompose": "json",
    "render": "dot",
    "bseq": "csv",
    "subst": "text",
    "patterns": "text",
}
_FORMAT_CHOICES = {
    "sigma0": ("text", "csv", "json"),
    "verify": ("json", "text"),
    "search": ("json",),
    "decompose": ("json",),
    "render": ("dot",),
    "bseq": ("csv", "text", "json"),
    "subst": ("text", "json"),
    "patterns": ("text", "json"),
}


class _UsageError(ValueError):
    """Bad request shape: malformed flags, syntax, or inapplicable options."""


class _Run:
    """Resolved configuration: flags over config-file values over defaults."""

    def __init__(self, ns: argparse.Namespace):
        self.ns = ns
        self.file_values = {}
        path = getattr(ns, "config_file", None)
        if path:
            try:
                loaded = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise _UsageError(f"cannot read config file {path}: {exc}")
            if not isinstance(loaded, dict):
                raise _UsageError(f"config file {path} must hold a JSON object")
            self.file_values = loaded

    def get(self, name: str, fallback=None):
        value = getattr(self.ns, name, None)
        if value is None:
            value = self.file_values.get(name)
        if value is None:
            value = _DEFAULTS.get(name)
        if value is None:
            value = fallback
        return value

    def int_of(self, name: str, fallback=None, minimum: Optional[int] = None) -> int:
        value = self.get(name, fallback)
        if not isinstance(value, int) or isinstance(value, bool):
            raise _UsageError(f"--{name.replace('_', '-')} needs an integer, got {value!r}")
        if minimum is not None and value < minimum:
            raise _UsageError(f"--{name.replace('_', '-')} must be at least {minimum}")
        return value

    def table(self) -> FiniteGroupTable:
        return parse_group_spec(self.get("lambda_spec"))

    def radius(self, command: str) -> int:
        return self.int_of("radius", _RADIUS_DEFAULTS[command], minimum=0)

    def format(self, command: str) -> str:
        value = self.get("format", _FORMAT_DEFAULTS[command])
        if value not in _FORMAT_CHOICES[command]:
            allowed = "|".join(_FORMAT_CHOICES[command])
            raise _UsageError(f"format {value!r} not supported here (use {allowed})")
        return value

    def emit(self, text: str) -> None:
        out = self.get("out")
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)


def _parse_descriptor(run: _Run) -> SubgroupDescriptor:
    text = run.get("subgroup")
    if not text:
        raise _UsageError("a subgroup descriptor is required (e.g. sumker:cyclic:3:1)")
    if not text.startswith("sumker:"):
        raise _UsageError(f"unknown descriptor family in {text!r} (expected sumker:<lambda>:<d>)")
    body = text[len("sumker:") :]
    group_spec, _, period = body.rpartition(":")
    if not group_spec or not period.isdigit() or int(period) < 1:
        raise _UsageError(f"descriptor {text!r} must end in a positive integer period")
    try:
        table = parse_group_spec(group_spec)
        sub = make_sum_kernel(table, int(period))
    except (GroupSpecError, DescriptorError) as exc:
        raise _UsageError(str(exc))
    if run.get("lambda_spec") != _DEFAULTS["lambda_spec"] and run.table() != table:
        raise _UsageError("--lambda and the descriptor's lamp group disagree")
    return sub


# ---------------------------------------------------------------------------
# subcommands


def cmd_sigma0(run: _Run) -> int:
    table = run.table()
    fmt = run.format("sigma0")
    if run.ns.elements:
        cells = [parse_element(table, text) for text in run.ns.elements]
    else:
        cells = ball(table, run.radius("sigma0"), generating_set(table, run.get("genset")))
    rows = sorted(
        ((g, horizontal_coord(g), sigma0(g)) for g in cells),
        key=lambda row: (row[1], elem_key(row[0])),
    )
    if fmt == "json":
        payload = [
            {"elem": format_element(g), "coord": coord, "bit": bit} for g, coord, bit in rows
        ]
        run.emit(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["element", "coord", "bit"])
        for g, coord, bit in rows:
            writer.writerow([format_element(g), coord, bit])
        run.emit(buf.getvalue())
    else:
        width = max([len("element")] + [len(format_element(g)) for g, _, _ in rows])
        lines = [f"{'element':<{width}}  coord  bit"]
        for g, coord, bit in rows:
            lines.append(f"{format_element(g):<{width}}  {coord:>5}  {bit}")
        run.emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(run: _Run) -> int:
    report = run_verification(
        run.table(),
        radius=run.radius("verify"),
        seed=run.int_of("seed"),
        cases=run.int_of("cases", minimum=1),
        mutate=bool(run.ns.mutate),
        node_cap=min(run.int_of("node_cap", minimum=0), 10**6),
    )
    if run.format("verify") == "json":
        run.emit(report.to_json() + "\n")
    else:
        lines = []
        for p in report.properties:
            status = "PASS" if p.passed else "FAIL"
            lines.append(f"{p.name:<32} {status}  checked={p.checked}")
            lines.extend(f"    {failure}" for failure in p.failures)
        failed = sum(1 for p in report.properties if not p.passed)
        lines.append(
            "all properties passed" if not failed else f"{failed} properties failed"
        )
        run.emit("\n".join(lines) + "\n")
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_search(run: _Run) -> int:
    table = run.table()
    run.format("search")
    spec = conformist_spec(table)
    radius = run.radius("search")
    domain = ball(table, radius, generating_set(table, run.get("genset")))
    limits = SearchLimits(
        node_cap=run.int_of("node_cap", minimum=0),
        workers=run.int_of("workers", minimum=1),
    )
    hint_name = run.get("hint") or ("reference" if run.ns.mode == "complete" else "none")
    if hint_name not in ("reference", "none"):
        raise _UsageError(f"unknown hint {hint_name!r} (use reference|none)")
    hint = sigma0 if hint_name == "reference" else None
    if run.ns.mode == "complete":
        if run.get("subgroup"):
            raise _UsageError("--subgroup only applies to invariant mode")
        outcome = complete_search(spec, domain, limits=limits, hint=hint)
    else:
        sub = _parse_descriptor(run)
        if sub.table != table:
            raise _UsageError("--lambda and the descriptor's lamp group disagree")
        gens = transfer_generators(table, sub.t_power_in_gamma, span=radius + sub.d)
        outcome = invariant_search(spec, gens, domain, limits=limits, hint=hint)
    run.emit(outcome_to_json(outcome) + "\n")
    return EXIT_RESOURCE if outcome.status == "RESOURCE_LIMIT" else EXIT_OK


def cmd_decompose(run: _Run) -> int:
    sub = _parse_descriptor(run)
    table = sub.table
    if run.ns.certify and run.ns.elements:
        raise _UsageError("--certify does not take elements")
    run.format("decompose")
    if run.ns.elements:
        rows = []
        for text in run.ns.elements:
            g = parse_element(table, text)
            if g.shift != 0:
                raise _UsageError(f"{text!r} has a shift; decompose expects lamp-only elements")
            dec = decompose(g.lamp, sub)
            rows.append(
                {
                    "elem": format_element(g),
                    "mu_L": format_element(Elem(table, dec.mu_L)),
                    "mu_minus": format_element(Elem(table, dec.mu_minus)),
                    "k": dec.k,
                }
            )
        payload = {"descriptor": sub.description, "d": sub.d, "decompositions": rows}
        run.emit(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    spec = conformist_spec(table)
    cert = certify(sub, spec)
    problems = check_certificate(cert, spec)
    run.emit(certificate_to_json(cert, problems) + "\n")
    return EXIT_OK if not problems else EXIT_FAILURE


def cmd_render(run: _Run) -> int:
    table = run.table()
    run.format("render")
    radius = run.radius("render")
    gens = generating_set(table, run.get("genset"))
    domain = ball(table, radius, gens)
    labels_path = run.get("labels")
    if labels_path:
        labels = _load_labels(table, labels_path)
    else:
        labels = sample_sigma0(domain)
    graph_label = f"{table.name} radius {radius} genset {run.get('genset')}"
    run.emit(render_dot(domain, gens, labels, graph_label=graph_label))
    return EXIT_OK


def _load_labels(table: FiniteGroupTable, path: str) -> PartialConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read labels file {path}: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"labels file {path} is not JSON: {exc}")
    if isinstance(data, dict):
        if data.get("witness") is None:
            raise _UsageError(f"labels file {path} holds no witness")
        data = data["witness"]
    if not isinstance(data, list):
        raise _UsageError(f"labels file {path} must hold a config list or search outcome")
    return config_from_json(table, json.dumps(data))


def cmd_tables(run: _Run) -> int:
    table = run.table()
    which = run.ns.which
    fmt = run.format(which)
    base = table.order
    if which == "bseq":
        count = run.int_of("count", minimum=1)
        rows = [(n, digit_one_parity(n, base)) for n in range(count)]
        if fmt == "json":
            run.emit(json.dumps([{"n": n, "b": b} for n, b in rows], indent=2) + "\n")
        elif fmt == "text":
            run.emit("\n".join(f"{n:>4}  {b}" for n, b in rows) + "\n")
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["n", "b"])
            writer.writerows(rows)
            run.emit(buf.getvalue())
    elif which == "subst":
        iterations = run.int_of("iterations", minimum=1)
        words = substitution_iterates(base, iterations)
        if fmt == "json":
            run.emit(json.dumps({"base": base, "iterates": words}, indent=2) + "\n")
        else:
            run.emit("\n".join(words) + "\n")
    else:
        forbidden = forbidden_patterns(table)
        allowed = allowed_patterns(table)

        def describe(pattern):
            return ", ".join(f"{format_element(c)}={b}" for c, b in pattern.cells)

        if fmt == "json":
            payload = {
                "forbidden_count": len(forbidden),
                "allowed_count": len(allowed),
                "forbidden": [
                    [{"elem": format_element(c), "bit": b} for c, b in p.cells]
                    for p in forbidden
                ],
                "allowed": [
                    [{"elem": format_element(c), "bit": b} for c, b in p.cells]
                    for p in allowed
                ],
            }
            run.emit(json.dumps(payload, indent=2) + "\n")
        else:
            lines = [f"forbidden ({len(forbidden)}):"]
            lines.extend(f"  {describe(p)}" for p in forbidden)
            lines.append(f"allowed ({len(allowed)}):")
            lines.extend(f"  {describe(p)}" for p in allowed)
            run.emit("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring


def _add_shared(sub: argparse.ArgumentParser, *names: str) -> None:
    if "lambda" in names:
        sub.add_argument(
            "--lambda",
            dest="lambda_spec",
            metavar="SPEC",
            help="lamp group: cyclic:<m>, product:...x..., or inline JSON (default cyclic:3)",
        )
    if "radius" in names:
        sub.add_argument("--radius", type=int, help="ball radius for the window")
    if "genset" in names:
        sub.add_argument(
            "--genset", choices=("lamp-t", "symmetric"), help="generating set (default lamp-t)"
        )
    if "format" in names:
        sub.add_argument("--format", choices=("json", "csv", "dot", "text"))
    if "seed" in names:
        sub.add_argument("--seed", type=int, help="seed for randomized property runs")
    if "node-cap" in names:
        sub.add_argument("--node-cap", dest="node_cap", type=int, help="search node budget")
    if "workers" in names:
        sub.add_argument("--workers", type=int, help="parallel search workers (default 1)")
    if "out" in names:
        sub.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    sub.add_argument(
        "--config-file",
        metavar="PATH",
        help="JSON object supplying defaults for any of the long flags",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conformist",
        description="Exact arithmetic, verification, and search for the conformist subshift "
        "on lamplighter groups.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("sigma0", help="evaluate the explicit configuration")
    p.add_argument("elements", nargs="*", help="elements like 'a1@0 * t^2' (default: a ball)")
    _add_shared(p, "lambda", "radius", "genset", "format", "out")
    p.set_defaults(handler=cmd_sigma0)

    p = commands.add_parser("verify", help="run the property suite")
    p.add_argument("--cases", type=int, help="randomized cases per property (default 10000)")
    p.add_argument(
        "--mutate",
        action="store_true",
        help="flip one reference bit first; a healthy suite then fails",
    )
    _add_shared(p, "lambda", "radius", "format", "seed", "node-cap", "out")
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("search", help="exhaustive window search")
    p.add_argument("mode", choices=("complete", "invariant"))
    p.add_argument("--subgroup", metavar="DESC", help="descriptor, e.g. sumker:cyclic:3:1")
    p.add_argument("--hint", choices=("reference", "none"), help="branch-value ordering")
    _add_shared(p, "lambda", "radius", "genset", "format", "node-cap", "workers", "out")
    p.set_defaults(handler=cmd_search)

    p = commands.add_parser("decompose", help="factor lamps through a subgroup descriptor")
    p.add_argument("elements", nargs="*", help="lamp-only elements to decompose")
    p.add_argument("--subgroup", metavar="DESC", help="descriptor, e.g. sumker:cyclic:3:1")
    p.add_argument(
        "--certify",
        action="store_true",
        help="emit the validated unanimity-contradiction certificate (default with no elements)",
    )
    _add_shared(p, "lambda", "format", "out")
    p.set_defaults(handler=cmd_decompose)

    p = commands.add_parser("render", help="emit a DOT drawing of a labeled window")
    p.add_argument("--labels", metavar="PATH", help="config JSON or search outcome with witness")
    _add_shared(p, "lambda", "radius", "genset", "format", "out")
    p.set_defaults(handler=cmd_render)

    p = commands.add_parser("tables", help="emit reference tables")
    p.add_argument("which", choices=("bseq", "subst", "patterns"))
    p.add_argument("--count", type=int, help="bseq rows to emit (default 17)")
    p.add_argument("--iterations", type=int, help="substitution iterates to emit (default 3)")
    _add_shared(p, "lambda", "format", "out")
    p.set_defaults(handler=cmd_tables)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        run = _Run(ns)
        return ns.handler(run)
    except BallSizeError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DescriptorError as exc:
        # descriptor itself is well-formed but its claims fail at runtime
        print(f"descriptor failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (_UsageError, ElementSyntaxError, GroupSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
