"""Command-line interface: ``check``, ``classify``, ``verify`` and ``corpus``.

Exit codes: 0 verdict true / no violation, 1 verdict false / violation or
mismatch, 2 error.  Errors print ``{"error": {"code": ..., "message": ...}}``
on standard output so scripts can branch on the code.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from . import suites as S
from .abelian import MalformedInput, SizeGuardExceeded
from .certificates import replay
from .corpus import Corpus, read as read_corpus, write as write_corpus
from .instances import Instance, canonical_json, from_json, load
from .modules import ContextMismatch
from .properties import InvalidProperty, PropertyId, check, dual

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


def _emit(obj: Any) -> None:
    sys.stdout.write(canonical_json(obj) + "\n")


def _error(code: str, message: str) -> int:
    _emit({"error": {"code": code, "message": message}})
    return EXIT_ERROR


def _load(path: str) -> Instance:
    return load(path)


def _prop(name: str, use_dual: bool) -> PropertyId:
    pid = PropertyId.parse(name)
    return dual(pid) if use_dual else pid


# -- check ------------------------------------------------------------------------------------------


def _cmd_check(args: argparse.Namespace) -> int:
    pid = _prop(args.property, args.dual)
    inst = _load(args.module)
    m = inst.module()
    n = _load(args.codomain).module() if args.codomain else None
    start = time.perf_counter()
    cert = check(pid, m, n, strong=args.strong, strict=args.strict)
    elapsed = time.perf_counter() - start
    out: dict[str, Any] = {
        "instance": inst.name,
        "property": pid.value,
        "flags": {"strong": args.strong, "strict": args.strict},
        "verdict": cert.verdict,
        "certificate": cert.to_json(),
        "engine_version": __version__,
    }
    if args.audit:
        rep = replay(cert.to_json(), m, n)
        out["replay"] = {"ok": rep.ok, "scope": rep.scope, "problems": rep.problems}
    if args.timing:
        out["wall_time"] = round(elapsed, 6)
    _emit(out)
    return EXIT_TRUE if cert.verdict else EXIT_FALSE


# -- classify -----------------------------------------------------------------------------------


def _table(rows: Sequence[dict[str, Any]], columns: Sequence[str]) -> str:
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    return str(v).lower() if isinstance(v, bool) else str(v)


def _cmd_classify(args: argparse.Namespace) -> int:
    prop = PropertyId.parse(args.property).value
    if prop not in ("dual_cs_baer", "lifting"):
        raise CliError("invalid_argument", "classification is defined for dual-cs-baer and lifting")
    if args.mixed is not None:
        rows = S.classify_mixed(args.mixed, strong=args.strong, workers=args.workers, cross_check=args.cross_check)
        for r in rows:
            r.setdefault("engine", "-")
        columns = ["orders", "verdict", "engine", "predicate", "match", "method"]
        scope = {"max_order": args.mixed}
    else:
        if args.p is None or args.max_sum is None:
            raise CliError("invalid_argument", "give --p and --max-sum, or --mixed MAX_ORDER")
        if args.p < 2 or any(args.p % d == 0 for d in range(2, int(args.p**0.5) + 1)):
            raise CliError("invalid_argument", f"{args.p} is not prime")
        rows = S.classify_p_groups(args.p, args.max_sum, strong=args.strong, prop=prop, workers=args.workers)
        columns = ["partition", "orders", "verdict", "predicate", "match", "certificate"]
        scope = {"p": args.p, "max_sum": args.max_sum}
    mismatches = [r for r in rows if not r["match"]]
    text = _table(rows, columns) if args.format == "table" else "".join(canonical_json(r) + "\n" for r in rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    summary = {"property": prop, "strong": args.strong, **scope, "rows": len(rows), "mismatches": len(mismatches)}
    if args.out:
        _emit(summary)
    else:
        sys.stderr.write(canonical_json(summary) + "\n")
    return EXIT_TRUE if not mismatches else EXIT_FALSE


# -- verify ------------------------------------------------------------------------------------------

MODULE_SUITES: dict[str, Callable] = {
    "diagram": S.verify_diagram,
    "st00": S.verify_st00,
    "socrad": S.verify_socle_radical,
}
PAIR_SUITES: dict[str, Callable] = {
    "nonsingular": S.verify_nonsingular_equiv,
    "product": S.verify_product_reduction,
    "essip": S.verify_essip_bridge,
    "cononsingular": S.verify_cononsingular_bridge,
    "relative_weak_duo": S.verify_relative_weak_duo,
    "transfer": S.verify_transfer,
}
OTHER_SUITES = ("dsum", "ring")
SUITES = tuple(MODULE_SUITES) + tuple(PAIR_SUITES) + OTHER_SUITES


def _task_list(suite: str, corpus: Corpus, max_size: int) -> list[tuple]:
    """Picklable ``(suite, payload)`` tasks in canonical order."""
    inst = corpus.by_name()
    tasks: list[tuple] = []

    def need(name: str) -> dict:
        if name not in inst:
            raise CliError("parse_error", f"manifest names unknown instance {name!r}")
        return inst[name].to_json()

    if suite in MODULE_SUITES:
        tasks = [(suite, (i.to_json(),)) for i in corpus.instances if _size(i) <= max_size]
    elif suite in PAIR_SUITES:
        tasks = [(suite, (need(a), need(b))) for a, b in corpus.manifest.get("pairs", [])]
    elif suite == "dsum":
        tasks = [(suite, (need(d["m"]), [need(p) for p in d["parts"]])) for d in corpus.manifest.get("dsums", [])]
    elif suite == "ring":
        tasks = [(suite, (need(r["ring"]), r.get("commutative", False), [need(c) for c in r.get("cyclic", [])]))
                 for r in corpus.manifest.get("rings", [])]
        tasks += [("plus_ring", (need(r["m"]), need(r["ring"]))) for r in corpus.manifest.get("plus_ring", [])]
    return tasks


def _size(inst: Instance) -> int:
    out = 1
    for d in inst.orders:
        out *= d
    return out


def _module(data: dict):
    return from_json(data).module()


def run_task(task: tuple) -> dict[str, Any]:
    suite, payload = task
    if suite in MODULE_SUITES:
        r = MODULE_SUITES[suite](_module(payload[0]))
    elif suite in PAIR_SUITES:
        r = PAIR_SUITES[suite](_module(payload[0]), _module(payload[1]))
    elif suite == "dsum":
        r = S.verify_dsum_theorems(_module(payload[0]), [_module(p) for p in payload[1]])
    elif suite == "ring":
        ring, comm, cyclic = payload
        r = S.verify_ring_theorems(_module(ring), comm, [_module(c) for c in cyclic])
    else:
        r = S.verify_plus_ring(_module(payload[0]), _module(payload[1]))
    return r.to_json()


def run_tasks(tasks: list[tuple], workers: int) -> list[dict[str, Any]]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(run_task, tasks))
    return [run_task(t) for t in tasks]


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise CliError("unknown_suite", f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    corpus = read_corpus(args.corpus)
    names = SUITES if args.suite == "all" else (args.suite,)
    from .abelian import max_size

    tasks = [t for s in names for t in _task_list(s, corpus, max_size())]
    reports = run_tasks(tasks, args.workers)
    total = sum(r["violations"] for r in reports)
    counts = {st: sum(1 for r in reports for c in r["checks"] if c["status"] == st) for st in (S.PASS, S.VIOLATION, S.SKIPPED)}
    if args.format == "table":
        rows = [{"suite": r["suite"], "instance": r["instance"], "checks": len(r["checks"]),
                 "skipped": sum(c["status"] == S.SKIPPED for c in r["checks"]), "violations": r["violations"]}
                for r in reports]
        sys.stdout.write(_table(rows, ["suite", "instance", "checks", "skipped", "violations"]))
        sys.stdout.write(canonical_json({"violations": total, **counts}) + "\n")
    else:
        _emit({"suite": args.suite, "reports": reports, "violations": total, "counts": counts})
    return EXIT_TRUE if total == 0 else EXIT_FALSE


# -- corpus -------------------------------------------------------------------------------------------


def _corpus_run_one(task: tuple) -> dict[str, Any]:
    data, prop, strong, strict = task
    m = _module(data)
    try:
        cert = check(prop, m, strong=strong, strict=strict)
    except SizeGuardExceeded as exc:
        return {"instance": data["name"], "error": {"code": "size_guard", "message": str(exc)}}
    return {"instance": data["name"], "verdict": cert.verdict, "certificate": S.cert_hash(cert.to_json())}


def _cmd_corpus(args: argparse.Namespace) -> int:
    if args.action == "build":
        paths = write_corpus(args.dir)
        _emit({"written": len(paths), "dir": str(args.dir)})
        return EXIT_TRUE
    corpus = read_corpus(args.dir)
    if args.action == "list":
        for inst in corpus.instances:
            ring = inst.ring_name or "Z"
            _emit({"name": inst.name, "orders": list(inst.orders), "ring": ring, "size": _size(inst)})
        return EXIT_TRUE
    if not args.property:
        raise CliError("invalid_argument", "corpus run needs --property")
    pid = _prop(args.property, args.dual)
    tasks = [(i.to_json(), pid.value, args.strong, args.strict) for i in corpus.instances]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_corpus_run_one, tasks))
    else:
        rows = [_corpus_run_one(t) for t in tasks]
    for r in rows:
        _emit(r)
    return EXIT_TRUE


# -- entry point -----------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CliError("usage_error", message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finmod", description="Decide CS-Baer type properties of finite modules.")
    parser.add_argument("--version", action="version", version=f"finmod {__version__}")
    parser.add_argument("--max-size", type=int, help="size guard on ambient groups (default from FINMOD_MAX_SIZE)")
    sub = parser.add_subparsers(dest="command", required=True)

    def flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--strong", action="store_true", help="strong variant (fully invariant summands)")
        p.add_argument("--strict", action="store_true", help="strict variant of a summand intersection property")
        p.add_argument("--dual", action="store_true", help="use the dual property")
        p.add_argument("--max-size", type=int, default=argparse.SUPPRESS, help="size guard")
        p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = sub.add_parser("check", help="decide one property and print its certificate")
    p.add_argument("property")
    p.add_argument("module")
    p.add_argument("--codomain", help="instance file for N in relative properties")
    p.add_argument("--audit", action="store_true", help="replay the certificate with the independent checker")
    p.add_argument("--timing", action="store_true", help="include wall time (output is then not reproducible)")
    flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("classify", help="classification sweep over abelian p-groups or all small groups")
    p.add_argument("--p", type=int)
    p.add_argument("--max-sum", type=int)
    p.add_argument("--mixed", type=int, metavar="MAX_ORDER", help="sweep every abelian group of order <= MAX_ORDER")
    p.add_argument("--property", default="dual-cs-baer")
    p.add_argument("--cross-check", type=int, default=64, metavar="ORDER",
                   help="with --mixed, also run the general engine on groups up to this order")
    p.add_argument("--out", help="write the table here and print only the summary")
    p.add_argument("--format", choices=("table", "json"), default="table")
    flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="run a theorem suite over a corpus directory")
    p.add_argument("--suite", default="all")
    p.add_argument("corpus")
    p.add_argument("--format", choices=("table", "json"), default="json")
    flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("corpus", help="build, list or run a corpus directory")
    p.add_argument("action", choices=("build", "list", "run"))
    p.add_argument("dir")
    p.add_argument("--property")
    flags(p)
    p.set_defaults(func=_cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        return _error(exc.code, str(exc))
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    if getattr(args, "workers", 1) < 1:
        return _error("invalid_argument", "--workers must be at least 1")
    # the guard travels through the environment so worker processes see it
    saved = os.environ.get("FINMOD_MAX_SIZE")
    if getattr(args, "max_size", None):
        os.environ["FINMOD_MAX_SIZE"] = str(args.max_size)
    try:
        return _run(args)
    finally:
        if saved is None:
            os.environ.pop("FINMOD_MAX_SIZE", None)
        else:
            os.environ["FINMOD_MAX_SIZE"] = saved


def _run(args: argparse.Namespace) -> int:
    try:
        return args.func(args)
    except CliError as exc:
        return _error(exc.code, str(exc))
    except FileNotFoundError as exc:
        return _error("io_error", str(exc))
    except MalformedInput as exc:
        return _error("parse_error", str(exc))
    except SizeGuardExceeded as exc:
        return _error("size_guard", str(exc))
    except ContextMismatch as exc:
        return _error("context_mismatch", str(exc))
    except InvalidProperty as exc:
        return _error("invalid_property", str(exc))


if __name__ == "__main__":
    sys.exit(main())
