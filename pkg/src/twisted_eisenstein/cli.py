"""Command-line interface.

    twisted-eisenstein rationality --k 12 --s 5 --w 2
    twisted-eisenstein verify specfun
    twisted-eisenstein table --k 12 --format csv
    twisted-eisenstein coefficient --k 12 --s 4.5 --w 2 --m 1

Exit codes: 0 pass, 1 usage or domain error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from . import eisenstein as E
from . import exact_core as X
from . import verification as V
from ._backend import get_backend, set_backend
from .errors import TwistedEisensteinError
from .specfun import PrecisionPolicy

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
RATIONALITY_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    precision: PrecisionPolicy = field(default_factory=PrecisionPolicy)
    truncation: E.Truncation = field(default_factory=E.Truncation)
    output_format: str = "json"
    suite: Optional[str] = None


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    d = E.Truncation()
    g = p.add_argument_group("output and numerics")
    g.add_argument("--format", choices=("json", "csv", "text"), default="json")
    g.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend (default: numba when available)")
    g.add_argument("--c-max", type=int, default=d.c_max)
    g.add_argument("--n-max", type=int, default=d.n_max)
    g.add_argument("--det-max", type=int, default=d.det_max)
    g.add_argument("--entry-max", type=int, default=d.entry_max)
    g.add_argument("--x-samples", type=int, default=d.x_samples)
    g.add_argument("--y", type=float, default=d.y)
    g.add_argument("--target-abs-err", type=float, default=PrecisionPolicy().target_abs_err)
    g.add_argument("--max-terms", type=int, default=PrecisionPolicy().max_terms)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="twisted-eisenstein",
                description="Fourier coefficients of the twisted double Eisenstein series "
                            "and the rational inner-product values.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rationality", parents=[common],
                       help="exact rational inner product with a numeric cross-check")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--s", type=int, required=True)
    r.add_argument("--w", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("specfun", "identity", "oracle", "spectral", "all"))

    t = sub.add_parser("table", parents=[common], help="exact values over all valid (s, w)")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--s-min", type=int, default=None)
    t.add_argument("--s-max", type=int, default=None)
    t.add_argument("--w-min", type=int, default=None)
    t.add_argument("--w-max", type=int, default=None)

    c = sub.add_parser("coefficient", parents=[common], help="series value of c(m)")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--s", type=complex, required=True)
    c.add_argument("--w", type=complex, required=True)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--oracle", action="store_true", help="also run the matrix-sum oracle")
    return p


def _config(ns) -> RunConfig:
    try:
        tr = E.Truncation(ns.c_max, ns.n_max, ns.det_max, ns.entry_max, ns.x_samples, ns.y)
        pol = PrecisionPolicy(ns.target_abs_err, ns.max_terms)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return RunConfig(pol, tr, ns.format, getattr(ns, "suite", None))


def _check_k(k: int):
    if k % 2:
        raise UsageError("k must be even")
    if k < 6:
        raise UsageError("k must be at least 6")


def _num(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


# commands ----------------------------------------------------------------------

def cmd_rationality(ns, cfg: RunConfig) -> dict:
    k, s, w = ns.k, ns.s, ns.w
    _check_k(k)
    if not (2 <= s <= k - 2 and 2 <= w <= k - 2):
        raise UsageError(f"need 2 <= s, w <= k-2 = {k - 2}")
    if (s + w) % 2 == 0:
        raise UsageError("opposite parity required")
    p = X.ParityPoint(k, s, w)
    val = X.inner_product_rational(p)
    row = {"k": k, "s": s, "w": w, "exact": X.fraction_str(val),
           "numerator": str(val.numerator), "denominator": str(val.denominator),
           "in_D": False, "numeric": None, "numeric_dev": None}
    status = "pass"
    pt = E.DomainPoint(k, s, w)
    if pt.in_D:
        # in D the point is already in F, so the value is an exact multiple of c(1)
        cv = E.corollary22_c1(pt, cfg.truncation)
        ratio = Fraction(2) ** s * math.factorial(k - 2) / (Fraction(2) ** (k - 2) * math.factorial(w - 1))
        q = X.prop41_c1_exact(p)
        dev = cv.rel_error_to(float(q) * V.c1_factor(k, w))
        row.update(in_D=True, numeric=cv.value.real / V.c1_factor(k, w) * float(ratio),
                   numeric_dev=dev,
                   numeric_error_estimate=cv.trunc_error_estimate / (abs(cv.value) or cv.magnitude))
        if not dev <= RATIONALITY_TOL:
            status = "fail"
    return {"params": {"k": k, "s": s, "w": w}, "results": [row],
            "tolerances": {"numeric_dev": RATIONALITY_TOL}, "status": status}


def cmd_verify(ns, cfg: RunConfig) -> dict:
    checks = V.run_suite(ns.suite, cfg.truncation, cfg.precision)
    status = "pass" if all(c.passed for c in checks) else "fail"
    return {"params": {"suite": ns.suite},
            "results": [c.as_dict() for c in checks],
            "tolerances": {c.name: c.tolerance for c in checks}, "status": status}


def cmd_table(ns, cfg: RunConfig) -> dict:
    k = ns.k
    _check_k(k)
    lo, hi = 2, k - 2
    s_min = lo if ns.s_min is None else ns.s_min
    s_max = hi if ns.s_max is None else ns.s_max
    w_min = lo if ns.w_min is None else ns.w_min
    w_max = hi if ns.w_max is None else ns.w_max
    if s_min > s_max or w_min > w_max:
        raise UsageError("bad range: minimum exceeds maximum")
    rows = []
    for s in range(max(s_min, lo), min(s_max, hi) + 1):
        for w in range(max(w_min, lo), min(w_max, hi) + 1):
            if (s + w) % 2:
                v = X.inner_product_rational(X.ParityPoint(k, s, w))
                rows.append({"k": k, "s": s, "w": w,
                             "numerator": str(v.numerator), "denominator": str(v.denominator)})
    return {"params": {"k": k, "s_min": s_min, "s_max": s_max, "w_min": w_min, "w_max": w_max},
            "results": rows, "tolerances": {}, "status": "pass"}


def cmd_coefficient(ns, cfg: RunConfig) -> dict:
    _check_k(ns.k)
    if ns.m < 1:
        raise UsageError("m must be a positive integer")
    pt = E.DomainPoint(ns.k, ns.s, ns.w)
    cv = E.coefficient_c_m(pt, ns.m, cfg.truncation)
    row = {"k": ns.k, "s": _num(ns.s), "w": _num(ns.w), "m": ns.m,
           "value": _num(cv.value), "error_estimate": cv.trunc_error_estimate}
    status = "pass"
    tol = {}
    if ns.oracle:
        bf = E.brute_force_fourier(pt, ns.m, cfg.truncation)
        dev = V.oracle_deviation(cv, bf)
        row.update(oracle=_num(bf.value), oracle_error_estimate=bf.trunc_error_estimate,
                   oracle_dev=dev)
        tol = {"oracle_dev": 1e-2}
        status = "pass" if dev <= 1e-2 else "fail"
    return {"params": {"k": ns.k, "s": _num(ns.s), "w": _num(ns.w), "m": ns.m},
            "results": [row], "tolerances": tol, "status": status}


COMMANDS = {"rationality": cmd_rationality, "verify": cmd_verify,
            "table": cmd_table, "coefficient": cmd_coefficient}

CSV_COLUMNS = {
    "rationality": ["k", "s", "w", "numerator", "denominator", "numeric_dev"],
    "verify": ["name", "deviation", "tolerance", "passed"],
    "table": ["k", "s", "w", "numerator", "denominator"],
    "coefficient": ["k", "s", "w", "m", "value", "error_estimate"],
}


# output ---------------------------------------------------------------------------

def render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, **report, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        return json.dumps(doc, sort_keys=True, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        cols = CSV_COLUMNS[command]
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        for r in report["results"]:
            wr.writerow(["" if r.get(c) is None else r.get(c) for c in cols])
        return buf.getvalue().rstrip("\n")
    lines = []
    if command == "verify":
        for r in report["results"]:
            lines.append(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']}: "
                         f"{r['deviation']:.3e} (tol {r['tolerance']:.0e})")
    elif command == "table":
        lines.append(f"k={report['params']['k']}: {len(report['results'])} pairs")
        for r in report["results"]:
            lines.append(f"  s={r['s']:>2} w={r['w']:>2}  {r['numerator']}/{r['denominator']}")
    elif command == "rationality":
        r = report["results"][0]
        lines.append(f"k={r['k']} s={r['s']} w={r['w']}: {r['exact']}")
        if r["in_D"]:
            lines.append(f"  numeric {r['numeric']!r}, relative deviation {r['numeric_dev']:.3e}")
        else:
            lines.append("  (s, w) outside D: no numeric cross-check")
    else:
        for r in report["results"]:
            lines.append(", ".join(f"{key}={val}" for key, val in r.items()))
    lines.append(f"status: {report['status']}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = _config(ns)
        if ns.backend is not None:
            set_backend(ns.backend)
        report = COMMANDS[ns.command](ns, cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TwistedEisensteinError, ValueError) as e:
        print(f"error: {str(e).splitlines()[0] if str(e) else type(e).__name__}", file=sys.stderr)
        return EXIT_USAGE
    report["params"]["backend"] = get_backend()
    report["params"]["truncation"] = asdict(cfg.truncation)
    print(render(ns.command, report, cfg.output_format))
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
