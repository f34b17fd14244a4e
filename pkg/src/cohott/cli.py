"""Command-line driver: check developments, report on the library, verify the graph model.

Exit codes: 0 when no record failed, 1 when some check failed, 2 on usage
or I/O errors.  ``--json`` output is schema-versioned and carries no
timings unless ``--timings`` is given, so it is byte-stable for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, cohesion, stdlib
from . import syntax as S
from .kernel import KernelTypeError, check_module, resolve
from .kernel.check import infer, normalize, normalize_at
from .kernel.env import base_env
from .kernel.pretty import show
from .model import SizeLimit, verify_cohesion

REPORT_SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments or unreadable inputs (exit 2)."""


@dataclass
class Record:
    name: str
    status: str
    ok: bool
    detail: dict = field(default_factory=dict)
    time: float = 0.0

    def to_dict(self, timings: bool) -> dict:
        d = {"name": self.name, "status": self.status, "ok": self.ok, **self.detail}
        if timings:
            d["time"] = round(self.time, 4)
        return d


@dataclass
class Report:
    command: str
    prelude_version: str
    records: list[Record] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.ok]

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.failures else EXIT_OK

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "tool": "cohott",
            "tool_version": __version__,
            "prelude_version": self.prelude_version,
            "command": self.command,
            "ok": not self.failures,
            "failures": [r.name for r in self.failures],
            "records": [r.to_dict(timings) for r in self.records],
            **self.extra,
        }


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    prelude: str = "builtin"
    json: bool = False
    trace: bool = False
    timings: bool = False
    type_in_type: bool = False
    assume: list[str] = field(default_factory=list)
    max_vertices: int = 3
    max_extra_edges: int = 0
    seed: int = 0
    fault: Optional[str] = None
    term: Optional[str] = None


# ---------------------------------------------------------------------------
# Rendering


def emit_report(report: Report, as_json: bool, timings: bool = False, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report.to_dict(timings), indent=2, sort_keys=True) + "\n")
        return
    out.write(f"cohott {__version__}  prelude {report.prelude_version or '-'}  "
              f"schema {REPORT_SCHEMA}  command {report.command}\n")
    out.write(f"{'name':<28} {'status':<18} detail\n")
    for r in report.records:
        line = f"{r.name:<28} {r.status:<18} {_summary(r)}"
        if timings:
            line += f"  ({r.time:.3f}s)"
        out.write(line.rstrip() + "\n")
    if report.records:
        out.write(f"{len(report.records)} records, {len(report.failures)} failed\n")


def _summary(r: Record) -> str:
    d = r.detail
    if "error" in d:
        where = f"{d['file']}:{d['line']}:{d['column']}: " if "line" in d else ""
        return where + d["error"]
    if "normal_form" in d:
        return f"{d['normal_form']} : {d['type']}"
    if "counterexample" in d:
        return d["counterexample"].get("reason", "")
    if d.get("status") == "skipped":
        return ""
    if "instances" in d:
        return f"{d['instances']} instances"
    return ""


# ---------------------------------------------------------------------------
# Prelude


def _prelude_env(cfg: RunConfig, report: Report):
    """The starting environment, or ``None`` after recording a prelude failure."""
    flags = cohesion.PreludeFlags(type_in_type=cfg.type_in_type)
    if cfg.prelude == "none":
        return base_env()
    if cfg.prelude == "builtin":
        prelude = cohesion.builtin_prelude(flags)
        source = "prelude/cohesion.cht"
        text = None
    else:
        text = _read(cfg.prelude)
        source = cfg.prelude
        try:
            prelude = cohesion.parse_prelude(text, flags, source)
        except (S.ParseError, S.LexError) as e:
            report.records.append(Record(source, "parse-error", False, {"error": str(e)}))
            return None
    report.prelude_version = prelude.version
    try:
        return cohesion.load_prelude(None, flags, prelude)
    except KernelTypeError as e:
        report.records.append(Record(e.decl or source, "prelude-error", False,
                                     _error_detail(e, source, text or cohesion.prelude_text())))
        return None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from e


def _position(text: str, offset: int) -> tuple[int, int]:
    prefix = text.encode("utf-8")[:offset].decode("utf-8", errors="ignore")
    line = prefix.count("\n") + 1
    return line, len(prefix) - (prefix.rfind("\n") + 1) + 1


def _error_detail(e: Exception, path: str, text: str) -> dict:
    d: dict = {"file": path, "error": str(e)}
    if isinstance(e, KernelTypeError):
        d["kind"] = e.kind
    span = getattr(e, "span", None)
    if isinstance(e, S.LexError):
        span = (e.offset, e.offset + 1)
    if span is not None:
        d["span"] = list(span)
        d["line"], d["column"] = _position(text, span[0])
    return d


# ---------------------------------------------------------------------------
# Commands


def _load_inputs(cfg: RunConfig, report: Report, env):
    """Fold the checker over every input file; returns the final environment."""
    for path in cfg.inputs:
        text = _read(path)
        try:
            module = S.parse_module(text, path)
        except (S.ParseError, S.LexError) as e:
            report.records.append(Record(path, "parse-error", False, _error_detail(e, path, text)))
            continue
        for d in module:
            t0 = time.perf_counter()
            env, results = check_module(env, [d], "user", cfg.type_in_type, frozenset(cfg.assume))
            res = results[0]
            elapsed = time.perf_counter() - t0
            if cfg.trace:
                print(f"[trace] {path}: {d.name} {'ok' if res.ok else 'error'} {elapsed:.3f}s", file=sys.stderr)
            if res.ok:
                status = "assumed" if res.assumed else ("postulate" if d.body is None else "checked")
                report.records.append(Record(d.name, status, True, {"file": path}, elapsed))
            else:
                report.records.append(Record(d.name, "error", False, _error_detail(res.error, path, text), elapsed))
                break
    return env


def run_check(cfg: RunConfig) -> Report:
    report = Report("check", "")
    env = _prelude_env(cfg, report)
    if env is not None:
        _load_inputs(cfg, report, env)
    return report


def run_normalize(cfg: RunConfig) -> Report:
    report = Report("normalize", "")
    env = _prelude_env(cfg, report)
    if env is None:
        return report
    env = _load_inputs(cfg, report, env)
    if report.failures:
        return report
    report.records.clear()
    assert cfg.term is not None
    try:
        if cfg.term in env:
            entry = env[cfg.term]
            if entry.body is None:
                nf, ty = None, entry.type
            else:
                nf, ty = normalize_at(env, entry.body, entry.type, type_in_type=cfg.type_in_type), entry.type
        else:
            term = resolve(S.parse_term(cfg.term), env)
            ty = infer(env, term, type_in_type=cfg.type_in_type)
            nf = normalize(env, term, type_in_type=cfg.type_in_type)
    except (S.ParseError, S.LexError) as e:
        report.records.append(Record(cfg.term, "parse-error", False, {"error": str(e)}))
        return report
    except KernelTypeError as e:
        report.records.append(Record(cfg.term, "error", False, {"error": str(e), "kind": e.kind}))
        return report
    report.records.append(Record(cfg.term, "normalized" if nf is not None else "postulate", True,
                                 {"normal_form": show(nf) if nf is not None else None, "type": show(ty)}))
    return report


def run_stdlib_report(cfg: RunConfig) -> Report:
    report = Report("stdlib-report", "")
    env = _prelude_env(cfg, report)
    if env is None:
        return report
    try:
        result = stdlib.check_stdlib(env, cfg.assume, cfg.type_in_type)
    except cohesion.MissingAxiom as e:
        report.records.append(Record("stdlib", "missing-axiom", False, {"error": str(e)}))
        return report
    except ValueError as e:
        raise UsageError(str(e)) from e
    for r in result.results:
        detail = {"tier": r.tier, "home": r.home}
        if r.error:
            detail["error"] = r.error
        report.records.append(Record(r.entry, r.status, r.ok, detail, r.wall_time))
    report.extra = {
        "assumed": list(result.assumed),
        "signatures_refused": result.signatures_refused,
        "release_ready": result.release_ready(),
        "waivers": {n: stdlib.WAIVERS[n] for n in result.assumed if n in stdlib.WAIVERS},
    }
    return report


def run_model_verify(cfg: RunConfig) -> Report:
    report = Report("model-verify", cohesion.prelude_version())
    try:
        result = verify_cohesion(cfg.max_vertices, cfg.max_extra_edges, cfg.seed, cfg.fault)
    except SizeLimit as e:
        raise UsageError(str(e)) from e
    for c in result.checks:
        report.records.append(Record(c.name, c.status, c.status != "fail", c.to_dict()))
    report.extra = {"model": {"params": result.params}}
    return report


COMMANDS = {
    "check": run_check,
    "normalize": run_normalize,
    "stdlib-report": run_stdlib_report,
    "model-verify": run_model_verify,
}


def run(cfg: RunConfig) -> tuple[int, Report]:
    report = COMMANDS[cfg.command](cfg)
    return report.exit_code, report


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cohott", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cohott {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the schema-versioned JSON report")
    common.add_argument("--timings", action="store_true", help="include wall-clock times in the output")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument("--prelude", default="builtin", metavar="builtin|PATH|none",
                        help="prelude to load before the inputs")
    kernel.add_argument("--type-in-type", action="store_true", help="disable universe level checks")
    kernel.add_argument("--trace", action="store_true", help="log each declaration to stderr")

    p = sub.add_parser("check", parents=[common, kernel], help="type-check .cht files")
    p.add_argument("inputs", nargs="*", metavar="FILE")
    p.add_argument("--assume", action="append", default=[], metavar="NAME",
                   help="admit this definition without checking its body (repeatable)")

    p = sub.add_parser("normalize", parents=[common, kernel], help="print the normal form of a name or term")
    p.add_argument("term", metavar="TERM")
    p.add_argument("inputs", nargs="*", metavar="FILE", help="files to load before normalizing")

    p = sub.add_parser("stdlib-report", parents=[common, kernel], help="status of every library entry")
    p.add_argument("--assume", action="append", default=[], metavar="NAME",
                   help="report this entry as assumed instead of proving it (repeatable)")

    p = sub.add_parser("model-verify", parents=[common], help="verify the reflexive-graph model")
    p.add_argument("--max-vertices", type=int, default=3, metavar="N")
    p.add_argument("--max-extra-edges", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--trace", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--fault", choices=["nabla"], help=argparse.SUPPRESS)
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(ns.command)
    for key, value in vars(ns).items():
        if key != "command" and hasattr(cfg, key):
            setattr(cfg, key, value)
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        code, report = run(cfg)
    except UsageError as e:
        print(f"cohott: {e}", file=sys.stderr)
        return EXIT_USAGE
    emit_report(report, cfg.json, cfg.timings)
    return code


if __name__ == "__main__":
    sys.exit(main())
