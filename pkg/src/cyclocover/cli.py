"""Command-line front end: ``cyclocover <command> ...``.

Exit codes: 0 exact, 2 usage or malformed input, 3 bounds only,
4 budget exhausted (partial bounds printed), 5 recheck failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass

from .orbits import BudgetExceeded, default_threads

EXIT_EXACT, EXIT_USAGE, EXIT_BOUNDS, EXIT_BUDGET, EXIT_RECHECK = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    n: int | None = None
    n_from: int | None = None
    n_to: int | None = None
    budget: int = 1 << 26
    tuple_budget: int = 1 << 26
    mask_memory_mb: int = 1024
    fmt: str = "table"
    signed: bool = False
    threads: int = 1
    pools: str = "all"
    seed: int = 0

    def __post_init__(self):
        if self.budget <= 0 or self.tuple_budget <= 0 or self.mask_memory_mb <= 0:
            raise ValueError("budgets must be positive")
        if self.fmt not in ("table", "csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _check_q(q: int) -> None:
    from .ntheory import prime_power

    if prime_power(q) is None:
        raise ValueError(f"q = {q} is not a prime power")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_factor(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    from .polyring import factor_xn_minus_1

    _check_q(cfg.q)
    fac = factor_xn_minus_1(cfg.q, cfg.n)
    rows = []
    for i, f in enumerate(fac.factors):
        rows.append(
            {
                "index": i,
                "factor": f.poly.pretty(signed=cfg.signed),
                "coeffs": list(f.poly.coeffs),
                "degree": f.poly.degree,
                "multiplicity": f.multiplicity,
                "coset": list(f.coset),
            }
        )
    if cfg.fmt == "json":
        json.dump({"q": cfg.q, "n": cfg.n, "factors": rows}, out, indent=2)
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out)
        w.writerow(["index", "factor", "degree", "multiplicity", "coset"])
        for r in rows:
            w.writerow([r["index"], r["factor"], r["degree"], r["multiplicity"], " ".join(map(str, r["coset"]))])
    else:
        out.write(f"x^{cfg.n} - 1 over F_{cfg.q}: {len(rows)} irreducible factors\n")
        for r, f in zip(rows, fac.factors):
            mult = f"^{r['multiplicity']}" if r["multiplicity"] > 1 else ""
            out.write(f"  f_{r['index']} = ({r['factor']}){mult}    coset {{{', '.join(map(str, r['coset']))}}}\n")
            out.write(f"        {f.poly.to_text()}  {r['coeffs']}\n")
    return EXIT_EXACT


def _resolve(cfg: RunConfig, n: int, store, progress: bool):
    from .criteria import hq_resolve

    return hq_resolve(cfg.q, n, budget=cfg.budget, store=store, threads=cfg.threads, progress=progress, pools=cfg.pools)


def _exit_for(res) -> int:
    if res.status == "exact":
        return EXIT_EXACT
    return EXIT_BUDGET if getattr(res, "budget_limited", False) else EXIT_BOUNDS


def _cert_summary(c) -> str:
    d = c.to_json()
    kind = d["kind"]
    if kind == "covering_witness":
        return f"covering_witness h_{c.q}({c.n}) >= {c.codim}: duals {c.duals}"
    if kind == "exhaustive_nonexistence":
        return f"exhaustive_nonexistence h_{c.q}({c.n}) <= {c.codim - 1} [{c.method}] {json.dumps(c.counts, sort_keys=True)}"
    if kind == "theorem_bound":
        return f"theorem_bound {c.theorem}: {c.lo} <= h_{c.q}({c.n}) <= {c.hi}"
    return kind


def cmd_hq(cfg: RunConfig, out=None, output_path: str | None = None, progress: bool = True) -> int:
    out = out or sys.stdout
    from .criteria import ResultStore

    _check_q(cfg.q)
    try:
        res = _resolve(cfg, cfg.n, ResultStore(), progress)
    except BudgetExceeded as exc:
        from .ntheory import floor_log

        _err(f"budget exhausted: {exc}")
        out.write(f"0 <= h_{cfg.q}({cfg.n}) <= {floor_log(cfg.q, cfg.n)} [log bound]\n")
        return EXIT_BUDGET
    if output_path:
        with open(output_path, "w", encoding="utf-8") as fh:
            json.dump(res.to_json(), fh, indent=1, sort_keys=True)
    if cfg.fmt == "json":
        json.dump(res.to_json(), out, indent=1, sort_keys=True)
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out)
        w.writerow(["q", "n", "lo", "hi", "status", "headline"])
        w.writerow([res.q, res.n, res.lo, res.hi, res.status, res.headline])
    else:
        out.write(res.label() + "\n")
        out.write(f"status: {res.status}\n")
        out.write("provenance:\n")
        for p in res.provenance:
            out.write(f"  - {p}\n")
        for note in res.notes:
            out.write(f"  note: {note}\n")
        out.write("certificates:\n")
        for c in res.certificates:
            out.write(f"  - {_cert_summary(c)}\n")
    return _exit_for(res)


def cmd_table(cfg: RunConfig, out=None, progress: bool = True) -> int:
    out = out or sys.stdout
    from .criteria import ResultStore

    _check_q(cfg.q)
    if cfg.n_from < 1 or cfg.n_to < cfg.n_from:
        raise ValueError("need 1 <= --from <= --to")
    store = ResultStore()
    results = []
    for n in range(cfg.n_from, cfg.n_to + 1):
        t0 = time.time()
        results.append(_resolve(cfg, n, store, progress))
        if progress:
            _err(f"h_{cfg.q}({n}) resolved in {time.time() - t0:.1f} s")
    if cfg.fmt == "json":
        json.dump([r.to_json() for r in results], out, indent=1, sort_keys=True)
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out)
        w.writerow(["n", f"h_{cfg.q}(n)", "lo", "hi", "status", "provenance"])
        for r in results:
            val = r.value if r.value is not None else f"{r.lo}..{r.hi}"
            w.writerow([r.n, val, r.lo, r.hi, r.status, r.headline])
    else:
        out.write(f"{'n':>4} | {'h_' + str(cfg.q) + '(n)':>8} | provenance\n")
        out.write(f"{'-' * 4}-+-{'-' * 8}-+-{'-' * 40}\n")
        for r in results:
            val = str(r.value) if r.value is not None else f"{r.lo}..{r.hi}"
            out.write(f"{r.n:>4} | {val:>8} | {r.headline}\n")
    codes = [_exit_for(r) for r in results]
    return max(codes)


def cmd_recheck(path: str, fast: bool = False, out=None) -> int:
    out = out or sys.stdout
    from .certificates import MalformedCertificate, from_json
    from .criteria import recheck_result

    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _err(f"cannot read certificate: {exc}")
        return EXIT_USAGE
    try:
        if isinstance(obj, dict) and "kind" in obj:
            cert = from_json(obj)
            ok = cert.recheck(fast=fast)
            out.write(f"{_cert_summary(cert)}: {'pass' if ok else 'FAIL'}\n")
        elif isinstance(obj, dict) and "certificates" in obj:
            ok, msgs = recheck_result(obj, fast=fast)
            for m in msgs:
                out.write(m + "\n")
        else:
            raise MalformedCertificate("expected a certificate or a result object")
    except (MalformedCertificate, KeyError, TypeError, ValueError) as exc:
        _err(f"malformed certificate: {exc}")
        return EXIT_USAGE
    out.write("recheck: " + ("pass" if ok else "FAIL") + "\n")
    return EXIT_EXACT if ok else EXIT_RECHECK


def _example(cfg: RunConfig, n: int, out=None, progress: bool = True) -> int:
    """Pinned reproduction of the q = 3 worked examples."""
    out = out or sys.stdout
    from .criteria import component_codim1_check
    from .polyring import factor_xn_minus_1
    from .search import codim1_search, codim2_nonexistence

    q = 3
    t0 = time.time()
    fac = factor_xn_minus_1(q, n)
    out.write(f"x^{n} - 1 over F_3:\n")
    for i, f in enumerate(fac.factors):
        out.write(f"  f_{i} = {f.poly.pretty(signed=True)}\n")
        if f.multiplicity == 1:
            rep = component_codim1_check(q, n, f.poly)
            out.write(f"        covering hyperplane in its component: {'yes' if rep.admits else 'no'}\n")
    w = codim1_search(q, n, threads=cfg.threads)
    out.write(f"codim-1 witness: dual {w.duals[0] if w else None}\n")
    res = {}
    for pools in ("components", "all"):
        r = codim2_nonexistence(q, n, pools=pools, threads=cfg.threads, mask_memory_mb=cfg.mask_memory_mb, progress=progress)
        res[pools] = r
        counts = getattr(r, "counts", {})
        out.write(f"codim-2 search ({pools} pools): {type(r).__name__}\n")
        for k in sorted(counts):
            out.write(f"  {k}: {json.dumps(counts[k], sort_keys=True)}\n")
    from .certificates import ExhaustiveNonExistence

    exact = w is not None and all(isinstance(r, ExhaustiveNonExistence) for r in res.values())
    if exact:
        out.write(f"h_3({n}) = 1\n")
    out.write(f"elapsed: {time.time() - t0:.1f} s\n")
    return EXIT_EXACT if exact else EXIT_BOUNDS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclocover", description="Cyclically covering subspaces of F_q^n.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_n=True):
        p.add_argument("-q", type=_positive, required=True, help="field size (prime power)")
        if need_n:
            p.add_argument("-n", type=_positive, required=True, help="length")
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        p.add_argument("--threads", type=_positive, default=None)
        p.add_argument("--budget", type=_positive, default=1 << 26, help="max q^n for explicit searches")
        p.add_argument("--mask-memory-mb", type=_positive, default=1024)
        p.add_argument("--quiet", action="store_true", help="no progress on stderr")
        p.add_argument("--pools", choices=("components", "all"), default="all", help="codim-2 pair pools")

    p = sub.add_parser("factor", help="factor x^n - 1 over F_q")
    common(p)
    p.add_argument("--signed", action="store_true", help="print p-1 as -1")

    p = sub.add_parser("hq", help="resolve h_q(n) with certificates")
    common(p)
    p.add_argument("-o", "--output", help="write the result JSON here")

    p = sub.add_parser("table", help="h_q(n) over a range of n")
    common(p, need_n=False)
    p.add_argument("--from", dest="n_from", type=_positive, required=True)
    p.add_argument("--to", dest="n_to", type=_positive, required=True)

    p = sub.add_parser("recheck", help="independently recheck a certificate or result JSON")
    p.add_argument("path")
    p.add_argument("--fast", action="store_true", help="sample 1%% of refutations, skip re-running searches")

    for name in ("example11", "example16"):
        p = sub.add_parser(name, help=f"reproduce the q = 3, n = {name[7:]} worked example")
        p.add_argument("--threads", type=_positive, default=None)
        p.add_argument("--mask-memory-mb", type=_positive, default=1024)
        p.add_argument("--quiet", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "recheck":
        return cmd_recheck(args.path, fast=args.fast)
    threads = args.threads or default_threads()
    progress = not getattr(args, "quiet", False)
    try:
        cfg = RunConfig(
            command=args.command,
            q=getattr(args, "q", 3),
            n=getattr(args, "n", None),
            n_from=getattr(args, "n_from", None),
            n_to=getattr(args, "n_to", None),
            budget=getattr(args, "budget", 1 << 26),
            mask_memory_mb=args.mask_memory_mb,
            fmt=getattr(args, "format", "table"),
            signed=getattr(args, "signed", False),
            threads=threads,
            pools=getattr(args, "pools", "all"),
        )
        if args.command == "factor":
            return cmd_factor(cfg)
        if args.command == "hq":
            return cmd_hq(cfg, output_path=args.output, progress=progress)
        if args.command == "table":
            return cmd_table(cfg, progress=progress)
        if args.command in ("example11", "example16"):
            return _example(cfg, int(args.command[7:]), progress=progress)
    except BudgetExceeded as exc:
        _err(f"budget exhausted: {exc}")
        return EXIT_BUDGET
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    ap.print_usage(sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
