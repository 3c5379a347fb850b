"""Command-line front end.

Exit codes: 0 ok, 1 failed verification, 2 usage error, 3 precision below
the requested level.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import eisenstein as eis
from . import fourier as fo
from . import formal as fm
from .mahler import amice_tail_bound
from .rings import QQ, PAdicError, PAdicRing, PAdicScalar, PrecisionError, is_prime
from .series import SeriesError, TruncationError, TruncSeries
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DEGRADED = 0, 1, 2, 3
DEFAULT_PREC, DEFAULT_DEG, DEFAULT_QORDER = 6, 64, 8


class UsageError(Exception):
    pass


@dataclass
class CliRequest:
    command: str
    action: str | None
    params: dict
    format: str = "json"
    out: str | None = None

    def echo(self) -> dict:
        doc = {"command": self.command}
        if self.action:
            doc["action"] = self.action
        for k, v in sorted(self.params.items()):
            if v is not None:
                doc[k] = QQ.to_str(v) if isinstance(v, Fraction) else v
        return doc


@dataclass
class Report:
    request: dict
    result: object
    certification: dict = field(default_factory=dict)
    status: str = "ok"
    diagnostics: list = field(default_factory=list)
    rows: list | None = None
    text: list | None = None

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "failed": EXIT_FAILED, "degraded-precision": EXIT_DEGRADED}[self.status]

    def to_json(self) -> dict:
        doc = {"request": self.request, "result": self.result, "certification": self.certification,
               "status": self.status}
        if self.diagnostics:
            doc["diagnostics"] = self.diagnostics
        return doc


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--prec", type=int, help="p-adic precision K")
    common.add_argument("--deg", type=int, help="t-adic degree bound D")
    common.add_argument("--qorder", type=int, help="q-adic order M")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--kmax", type=int)
    common.add_argument("--g2", type=Fraction)
    common.add_argument("--g3", type=Fraction)
    common.add_argument("--mode")
    common.add_argument("--a", type=int, help="point of a Dirac measure")
    common.add_argument("--values", help="comma-separated vector for cartier transform")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out")

    ap = argparse.ArgumentParser(prog="padic-eisenstein", description="Integral p-adic Fourier theory and Eisenstein moments")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, actions in (("amice", ("transform", "invert")), ("eis", ("x-depleted", "moments")),
                          ("tate", ("moments",)), ("cartier", ("transform", "check"))):
        sp = sub.add_parser(name)
        sp.add_argument("action", choices=actions)
        for a in common._actions:
            if a.dest != "help":
                sp._add_action(a)
    sub.add_parser("zeta", parents=[common])
    vp_ = sub.add_parser("verify", parents=[common])
    vp_.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return ap


def _need(params: dict, *names) -> None:
    missing = [f"--{n}" for n in names if params.get(n) is None]
    if missing:
        raise UsageError(f"missing required flag(s): {' '.join(missing)}")


def _check_prime(p: int, eisenstein: bool) -> None:
    if not is_prime(p):
        raise UsageError(f"--p {p} is not prime")
    if eisenstein and p <= 3:
        raise UsageError(f"--p {p}: Eisenstein commands require p > 3")


def parse(argv: list[str]) -> CliRequest:
    """Validated request; raises UsageError (exit 2) on domain violations."""
    ap = _parser()
    ns = ap.parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "action", "format", "out")}
    req = CliRequest(ns.command, getattr(ns, "action", None), params, ns.format, ns.out)
    cmd, act = req.command, req.action
    if params.get("prec") is not None and params["prec"] < 1:
        raise UsageError("--prec must be at least 1")
    if params.get("deg") is not None and params["deg"] < 1:
        raise UsageError("--deg must be at least 1")
    if params.get("qorder") is not None and params["qorder"] < 1:
        raise UsageError("--qorder must be at least 1")
    eisen = cmd in ("eis", "tate", "zeta")
    if params.get("p") is not None:
        _check_prime(params["p"], eisen)
    n = params.get("n")
    if eisen and n is not None:
        if n == 0:
            raise UsageError("--n must be nonzero")
        if params.get("p") is not None and n % params["p"] == 0:
            raise UsageError(f"--p {params['p']} divides --n {n}; p must not divide n")
    if cmd == "eis":
        _need(params, "g2", "g3", "n")
        if act == "moments":
            _need(params, "kmax")
            if params["kmax"] < 2:
                raise UsageError("--kmax must be at least 2")
            mode = params.get("mode") or "both"
            if mode not in ("rational", "formal", "both"):
                raise UsageError("--mode must be rational, formal or both")
            params["mode"] = mode
        else:
            params.setdefault("deg", None)
            if params["deg"] is None:
                params["deg"] = 12
        if params.get("p") is not None and (params["g2"].denominator % params["p"] == 0
                                            or params["g3"].denominator % params["p"] == 0):
            raise UsageError("--g2/--g3 must be p-integral")
    elif cmd == "tate":
        _need(params, "p", "n", "kmax")
        if params["kmax"] < 2:
            raise UsageError("--kmax must be at least 2")
    elif cmd == "zeta":
        _need(params, "p", "n", "k")
        if params["k"] < 3:
            raise UsageError("--k must be at least 3")
    elif cmd == "amice":
        _need(params, "p")
        mode = params.get("mode") or "dirac"
        if mode not in ("dirac", "eisenstein"):
            raise UsageError("--mode must be dirac or eisenstein")
        params["mode"] = mode
        if mode == "dirac":
            _need(params, "a")
        else:
            _need(params, "n")
            if params["p"] <= 3:
                raise UsageError(f"--p {params['p']}: Eisenstein measures require p > 3")
            if params["n"] % params["p"] == 0:
                raise UsageError("p must not divide n")
        if act == "invert":
            _need(params, "k")
            if params["k"] < 0:
                raise UsageError("--k (the level) must be nonnegative")
    elif cmd == "cartier":
        _need(params, "p", "n")
        if params["n"] < 1:
            raise UsageError("--n (the level) must be at least 1")
        if act == "transform":
            mode = params.get("mode") or "to_function"
            if mode not in ("to_function", "to_measure"):
                raise UsageError("--mode must be to_function or to_measure")
            params["mode"] = mode
            N = params["p"] ** params["n"]
            if params.get("values") is None:
                raise UsageError("--values is required for cartier transform")
            try:
                vals = [int(v) for v in params["values"].split(",")]
            except ValueError:
                raise UsageError("--values must be comma-separated integers") from None
            if len(vals) != N:
                raise UsageError(f"--values needs exactly p^n = {N} entries")
            params["values"] = vals
    return req


# ---------------------------------------------------------------------------


def _prec(params) -> int:
    return params.get("prec") or DEFAULT_PREC


def _padic_text(value: int, p: int, prec: int) -> str:
    return f"{value % p**prec} + O({p}^{prec})"


def _series_rows(series: TruncSeries, system: str, precision) -> list:
    ring = series.ring
    return [[e, ring.to_str(c), system, "" if precision is None else precision]
            for e, c in sorted(series.coeffs.items())]


def _moment_report(req: CliRequest, table: eis.MomentTable, cert: dict, status: str = "ok", diag=None) -> Report:
    rows = [[e.k, table.ring.to_str(e.value), e.system, "" if e.precision is None else e.precision]
            for e in sorted(table.entries, key=lambda e: e.k)]
    text = [f"k={e.k} [{e.system}]: {table.value_text(e)}" for e in sorted(table.entries, key=lambda e: e.k)]
    return Report(req.echo(), table.to_json(), cert, status, diag or [], rows, text)


def _run_eis(req: CliRequest) -> Report:
    P = req.params
    w = fm.WeierstrassData(P["g2"], P["g3"])
    p = P.get("p")
    K = _prec(P) if p else None
    ring = PAdicRing(p, K) if p else None
    if req.action == "x-depleted":
        D = P["deg"]
        coords, fg = eis.formal_setup(w, D + 2)
        xd = eis.x_depleted(coords, fg, P["n"], D, ring=ring)
        system = "formal-t"
        cert = {"truncation": {"t": D}, "precision": K, "oracles": []}
        rows = _series_rows(xd, system, K)
        text = [xd.pretty() + ("" if K is None else f" + O({p}^{K})")]
        return Report(req.echo(), xd.to_json(), cert, "ok", [], rows, text)
    kmax, n, mode = P["kmax"], P["n"], P["mode"]
    if mode == "rational":
        table = eis.eis_moments_rational(w.g2, w.g3, n, kmax)
        if ring is not None:
            table = _reduce_table(table, ring)
        return _moment_report(req, table, {"oracles": ["wp-recursion"], "precision": K})
    coords, fg = eis.formal_setup(w, kmax)
    table = eis.eis_moments_formal(coords, fg, n, kmax, ring=ring)
    cert = {"oracles": ["invariant-derivation"], "precision": K, "truncation": {"t": kmax - 1}}
    if mode == "formal":
        return _moment_report(req, table, cert)
    other = eis.eis_moments_rational(w.g2, w.g3, n, kmax)
    if ring is not None:
        other = _reduce_table(other, ring)
    diag = [{"k": k, "formal": table.ring.to_str(v), "rational": other.ring.to_str(other.value(k))}
            for k, v in table.values().items() if v != other.value(k)]
    cert["oracles"].append("wp-recursion")
    cert["agree"] = not diag
    return _moment_report(req, table, cert, "failed" if diag else "ok", diag)


def _reduce_table(table: eis.MomentTable, ring: PAdicRing) -> eis.MomentTable:
    entries = [eis.MomentEntry(e.k, ring.coerce(e.value), e.system, ring.tag, ring.K, e.truncation)
               for e in table.entries]
    return eis.MomentTable(table.curve, table.n, entries, ring.p, ring.K, None, ring)


def _run_tate(req: CliRequest) -> Report:
    P = req.params
    p, K, n, kmax = P["p"], _prec(P), P["n"], P["kmax"]
    M = P.get("qorder") or DEFAULT_QORDER
    table = eis.tate_katz_moments(n, kmax - 2, M, p, K)
    diag = []
    for e in table.entries:
        if e.k % 2 == 0 and e.k > 2:
            want = eis.katz_oracle(n, e.k, M, p, K)
        else:
            want = TruncSeries.zero(PAdicRing(p, K), M)
        if e.value != want:
            diag.append({"k": e.k, "got": table.ring.to_str(e.value), "expected": table.ring.to_str(want)})
    cert = {"oracles": ["q-expansion"], "precision": K, "truncation": {"t": kmax, "q": M}, "agree": not diag}
    return _moment_report(req, table, cert, "failed" if diag else "ok", diag)


def _run_zeta(req: CliRequest) -> Report:
    P = req.params
    p, n, k, K = P["p"], P["n"], P["k"], _prec(P)
    D = P.get("deg")
    need = max(amice_tail_bound(p, 1, 0, K), k)
    if D is not None and D < need:
        raise TruncationError(f"insufficient degree bound: --prec {K} at p={p} needs --deg >= {need}")
    z = eis.padic_zeta_value(p, n, k, K, D)
    expected = eis.zeta_oracle(p, n, k)
    exp_val = PAdicScalar.from_rational(expected, p, K) if expected else PAdicScalar(0, p, K)
    prec = z.precision
    agree = z.congruent(exp_val, prec)
    value = z.value % p**prec
    result = {"p": p, "n": n, "k": k, "value": str(value), "precision": prec, "ring": f"Zp({p},{K})"}
    cert = {"precision": prec, "requested": K, "degree": D or need, "oracles": ["euler-factor"],
            "expected": QQ.to_str(expected), "agree": agree}
    status = "ok"
    diag = []
    if not agree:
        status = "failed"
        diag.append({"k": k, "measured": str(value), "expected": QQ.to_str(expected)})
    elif prec < K:
        status = "degraded-precision"
        diag.append({"k": k, "precision": prec, "requested": K})
    rows = [[k, str(value), "padic-zeta", prec]]
    return Report(req.echo(), result, cert, status, diag, rows, [_padic_text(value, p, prec)])


def _run_amice(req: CliRequest) -> Report:
    P = req.params
    p, K = P["p"], _prec(P)
    D = P.get("deg") or DEFAULT_DEG
    if P["mode"] == "dirac":
        mu = fo.dirac(p, P["a"], D, K)
    else:
        mu = eis._cusp_measure(p, P["n"], K, D)
    if req.action == "transform":
        doc = mu.to_json()
        rows = _series_rows(mu.series, "amice", K)
        text = [mu.series.pretty() + f" + O({p}^{K})"]
        return Report(req.echo(), doc, {"precision": K, "truncation": {"t": D}}, "ok", [], rows, text)
    level = P["k"]
    N = p**level
    if N > D:
        raise TruncationError(f"level {level} needs --deg >= {N}")
    poly = [mu.series.coeffs.get(i, 0) for i in range(D)]
    red = fo.reduce_cyclic(poly, p, level, p**K)
    meas = fo.finite_level_transform(fo.FiniteLevelData(p, level, K, tuple(red), "function"), "to_measure")
    result = {"p": p, "level": level, "K": K, "values": [str(v) for v in meas.values]}
    rows = [[a, str(v), "coset-mass", K] for a, v in enumerate(meas.values)]
    text = [f"mu({a} + {p}^{level} Z_p) = {_padic_text(v, p, K)}" for a, v in enumerate(meas.values)]
    return Report(req.echo(), result, {"precision": K, "truncation": {"t": D}}, "ok", [], rows, text)


def _run_cartier(req: CliRequest) -> Report:
    P = req.params
    p, n, K = P["p"], P["n"], _prec(P)
    if req.action == "check":
        rep = fo.level_compatibility_check(p, n, K, trials=20, seed=0)
        rows = [[f["case"], f"{f['lhs']}!={f['rhs']}", f["diagram"], K] for f in rep["failures"]]
        text = [f"checked {rep['checked']} diagram instances: {'ok' if rep['ok'] else 'FAILED'}"]
        return Report(req.echo(), rep, {"precision": K}, "ok" if rep["ok"] else "failed",
                      rep["failures"], rows, text)
    kind = "measure" if P["mode"] == "to_function" else "function"
    data = fo.FiniteLevelData(p, n, K, tuple(P["values"]), kind)
    out = fo.finite_level_transform(data, P["mode"])
    result = {"p": p, "n": n, "K": K, "kind": out.kind, "values": [str(v) for v in out.values]}
    rows = [[i, str(v), out.kind, K] for i, v in enumerate(out.values)]
    text = [" ".join(_padic_text(v, p, K) for v in out.values)]
    return Report(req.echo(), result, {"precision": K}, "ok", [], rows, text)


def _run_verify(req: CliRequest) -> Report:
    suite = req.params.get("suite") or "all"
    results = run_suite(suite)
    ok = all(r["ok"] for r in results)
    rows = [[f"{r['suite']}/{r['check']}", "pass" if r["ok"] else "FAIL", r["suite"], ""] for r in results]
    text = [f"{'PASS' if r['ok'] else 'FAIL'} {r['suite']}/{r['check']}: {r['detail']}" for r in results]
    diag = [r for r in results if not r["ok"]]
    return Report(req.echo(), results, {"checks": len(results)}, "ok" if ok else "failed", diag, rows, text)


RUNNERS = {"eis": _run_eis, "tate": _run_tate, "zeta": _run_zeta, "amice": _run_amice,
           "cartier": _run_cartier, "verify": _run_verify}


def run(req: CliRequest) -> Report:
    return RUNNERS[req.command](req)


def emit(report: Report, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), indent=2, sort_keys=False) + "\n").encode()
    if fmt == "csv":
        if report.rows is None:
            raise UsageError("csv output is not available for this command")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "value", "system", "precision"])
        w.writerows(report.rows)
        return buf.getvalue().encode()
    lines = list(report.text or [])
    if report.status != "ok":
        lines.append(f"status: {report.status}")
        lines += [json.dumps(d, sort_keys=True) for d in report.diagnostics]
    return ("\n".join(lines) + "\n").encode()


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        req = parse(argv)
    except UsageError as exc:
        print(f"padic-eisenstein: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return int(exc.code or 0) and EXIT_USAGE
    try:
        report = run(req)
        data = emit(report, req.format)
    except UsageError as exc:
        print(f"padic-eisenstein: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (eis.EisensteinError, ValueError) as exc:
        print(f"padic-eisenstein: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, PrecisionError) as exc:
        print(f"padic-eisenstein: error: {exc}", file=sys.stderr)
        return EXIT_DEGRADED
    except (SeriesError, PAdicError) as exc:
        print(f"padic-eisenstein: error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if req.out:
        with open(req.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
