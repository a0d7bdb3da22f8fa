"""Command-line driver: ``ty3 build-tables | verify | report-diff``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .cache import cache_tables, default_cache_dir, load_or_build, table_hash
from .results import FAIL, PASS, SKIPPED, VerificationResult
from .twisted import build_tables
from . import verify as V

REPORT_VERSION = "ty3-report/1"


@dataclass
class RunConfig:
    max_weight: int = 8
    suites: List[str] = field(default_factory=lambda: list(V.SUITES))
    ks: List[int] = field(default_factory=lambda: [1, 2])
    report: Optional[str] = None
    cache_dir: Optional[str] = None
    jobs: int = 1
    strict: bool = False
    mutate: Optional[str] = None
    rtt_levels: int = 6
    pbw_weight: int = 5
    shifted_weight: int = 6
    phi_weight: int = 6
    center_weight: int = 5

    def validate(self) -> None:
        if self.max_weight < 1:
            raise ValueError("--max-weight must be at least 1")
        if any(k < 1 for k in self.ks):
            raise ValueError("k values must be >= 1")
        unknown = set(self.suites) - set(V.SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {', '.join(sorted(unknown))}")
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")

    def echo(self) -> Dict:
        return {
            "max_weight": self.max_weight,
            "suites": list(self.suites),
            "k": list(self.ks),
            "jobs": self.jobs,
            "strict": self.strict,
            "mutate": self.mutate,
            "rtt_levels": self.rtt_levels,
            "pbw_weight": self.pbw_weight,
            "shifted_weight": self.shifted_weight,
            "phi_weight": self.phi_weight,
            "center_weight": self.center_weight,
        }


def run_suite(name: str, tables, cfg: RunConfig) -> List[VerificationResult]:
    N = cfg.max_weight
    m, jobs = cfg.mutate, cfg.jobs
    if name == "rtt":
        return V.verify_rtt_and_ss(tables, mutate=m, rtt_levels=min(cfg.rtt_levels, N), jobs=jobs)
    if name == "theorem11":
        return V.verify_theorem_1_1(tables, N, mutate=m, jobs=jobs)
    if name == "theorem31":
        return V.verify_theorem_3_1(tables, mutate=m, jobs=jobs)
    if name == "molev":
        return V.verify_molev_maps(mutate=m)
    if name == "pbw":
        return V.verify_pbw(tables, min(cfg.pbw_weight, N), mutate=m)
    if name == "shifted":
        out = []
        for k in cfg.ks:
            out += V.verify_shifted(tables, k, min(cfg.shifted_weight, N), mutate=m, jobs=jobs)
        return out
    if name == "phi":
        out = []
        for k in cfg.ks:
            out += V.verify_phi_k(tables, k, min(cfg.phi_weight, N), mutate=m, jobs=jobs)
        return out
    if name == "center":
        return V.verify_center(tables, N, ks=cfg.ks, W_max=min(cfg.center_weight, N), mutate=m, jobs=jobs)
    raise ValueError(f"unknown suite {name!r}")


def _instance_json(r: VerificationResult) -> Dict:
    d = r.to_json()
    d.pop("suite", None)
    return d


def summarize(suites: List[Dict], strict: bool) -> Dict:
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    blocking = 0
    diagnostic_fail = 0
    for s in suites:
        for inst in s["instances"]:
            counts[inst["status"]] += 1
            diag = inst.get("key", {}).get("diagnostic", False)
            if diag:
                diagnostic_fail += inst["status"] == FAIL
            elif inst["status"] == FAIL or (strict and inst["status"] == SKIPPED):
                blocking += 1
    return {
        "total": sum(counts.values()),
        "pass": counts[PASS],
        "fail": counts[FAIL],
        "skipped": counts[SKIPPED],
        "diagnostic_fail": diagnostic_fail,
        "blocking_failures": blocking,
    }


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg.validate()
    t0 = time.perf_counter()
    tables, warnings = load_or_build(cfg.cache_dir, cfg.max_weight)
    suites = []
    for name in cfg.suites:
        s0 = time.perf_counter()
        results = run_suite(name, tables, cfg)
        suites.append({"suite": name, "instances": [_instance_json(r) for r in results]})
        tally = summarize([suites[-1]], cfg.strict)
        print(f"{name:10s} pass {tally['pass']:5d}  fail {tally['fail']:4d}  skipped {tally['skipped']:3d}"
              f"  blocking {tally['blocking_failures']:3d}  ({time.perf_counter() - s0:.1f}s)", file=out)
        failed = [r for r in results if r.status == FAIL and not r.key.get("diagnostic")]
        for r in failed[:5]:
            print(f"  FAIL {r.instance}: {r.detail or ''}"[:240], file=out)
        if len(failed) > 5:
            print(f"  ... {len(failed) - 5} more", file=out)
        for r in results:
            if r.instance.endswith("[protocol]"):
                print(f"  {r.status.upper()} {r.instance}: {r.detail}"[:400], file=out)
    summary = summarize(suites, cfg.strict)
    doc = {
        "version": REPORT_VERSION,
        "tool_version": __version__,
        "config": cfg.echo(),
        "table_hash": table_hash(tables),
        "suites": suites,
        "summary": summary,
        "warnings": warnings,
        "elapsed_ms": round((time.perf_counter() - t0) * 1e3, 1),
    }
    if cfg.report:
        path = Path(cfg.report)
        try:
            path.write_text(json.dumps(doc, indent=1) + "\n")
        except OSError as e:
            print(f"error: cannot write report {path}: {e}", file=sys.stderr)
            return 2
    for w in warnings:
        print(f"warning: {w}", file=out)
    print(f"total pass {summary['pass']}  fail {summary['fail']}  skipped {summary['skipped']}"
          f"  blocking failures {summary['blocking_failures']}", file=out)
    return 0 if summary["blocking_failures"] == 0 else 1


def _strip(doc: Dict) -> Dict:
    """Report content without timings."""
    suites = []
    for s in doc.get("suites", []):
        suites.append({"suite": s["suite"],
                       "instances": {i["id"]: (i["status"], i.get("residual_terms", 0)) for i in s["instances"]}})
    return {"config": {k: v for k, v in doc.get("config", {}).items() if k != "jobs"},
            "table_hash": doc.get("table_hash"), "suites": suites}


def report_diff(a: Dict, b: Dict) -> List[str]:
    """Differences between two reports, ignoring timings."""
    sa, sb = _strip(a), _strip(b)
    diffs = []
    if sa["table_hash"] != sb["table_hash"]:
        diffs.append(f"table_hash: {sa['table_hash']} != {sb['table_hash']}")
    if sa["config"] != sb["config"]:
        diffs.append(f"config: {sa['config']} != {sb['config']}")
    ia = {s["suite"]: s["instances"] for s in sa["suites"]}
    ib = {s["suite"]: s["instances"] for s in sb["suites"]}
    for name in sorted(set(ia) | set(ib)):
        x, y = ia.get(name), ib.get(name)
        if x is None or y is None:
            diffs.append(f"suite {name}: only in {'second' if x is None else 'first'} report")
            continue
        for inst in sorted(set(x) | set(y)):
            if x.get(inst) != y.get(inst):
                diffs.append(f"{name}/{inst}: {x.get(inst)} != {y.get(inst)}")
    return diffs


def _csv_list(text: str) -> List[str]:
    return [t for t in (p.strip() for p in text.split(",")) if t]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ty3", description="Exact verification engine for Y_3^+.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-tables", help="build and cache the coefficient tables")
    b.add_argument("--max-weight", type=int, default=8)
    b.add_argument("--cache-dir", default=None, help="default: $TY3_CACHE_DIR or ~/.cache/ty3")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", default=None,
                   help=f"suite name (repeatable or comma separated): {', '.join(V.SUITES)}")
    v.add_argument("--max-weight", type=int, default=8)
    v.add_argument("--k", action="append", default=None, help="shift values (repeatable or comma separated)")
    v.add_argument("--report", default=None, help="write a JSON report here")
    v.add_argument("--cache-dir", default=None, help="default: $TY3_CACHE_DIR or ~/.cache/ty3")
    v.add_argument("--no-cache", action="store_true", help="always rebuild tables in memory")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--strict", action="store_true", help="count skipped instances as failures")
    v.add_argument("--mutate", default=None,
                   help="negative control: drop one right-hand term in this relation family ('*' for all)")
    v.add_argument("--rtt-levels", type=int, default=6)
    v.add_argument("--pbw-weight", type=int, default=5)
    v.add_argument("--shifted-weight", type=int, default=6)
    v.add_argument("--phi-weight", type=int, default=6)
    v.add_argument("--center-weight", type=int, default=5)

    d = sub.add_parser("report-diff", help="compare two reports, ignoring timings")
    d.add_argument("first")
    d.add_argument("second")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "build-tables":
        t0 = time.perf_counter()
        tables = build_tables(args.max_weight)
        path = cache_tables(tables, args.cache_dir or default_cache_dir())
        print(f"built N={args.max_weight} in {time.perf_counter() - t0:.1f}s -> {path}")
        print(f"table hash {table_hash(tables)}")
        return 0
    if args.command == "verify":
        suites = [s for item in (args.suite or [",".join(V.SUITES)]) for s in _csv_list(item)]
        ks = [int(k) for item in (args.k or ["1,2"]) for k in _csv_list(item)]
        cache_dir = None if args.no_cache else (args.cache_dir or str(default_cache_dir()))
        cfg = RunConfig(max_weight=args.max_weight, suites=suites, ks=ks, report=args.report,
                        cache_dir=cache_dir, jobs=args.jobs, strict=args.strict, mutate=args.mutate,
                        rtt_levels=args.rtt_levels, pbw_weight=args.pbw_weight,
                        shifted_weight=args.shifted_weight, phi_weight=args.phi_weight,
                        center_weight=args.center_weight)
        try:
            return run(cfg)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    if args.command == "report-diff":
        a = json.loads(Path(args.first).read_text())
        b = json.loads(Path(args.second).read_text())
        diffs = report_diff(a, b)
        for line in diffs:
            print(line)
        print("reports agree" if not diffs else f"{len(diffs)} difference(s)")
        return 0 if not diffs else 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
