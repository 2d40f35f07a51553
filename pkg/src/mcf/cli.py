"""Batch command-line client for the expansion/verification pipelines.

Commands run in process against the same handlers the HTTP service uses;
pass --server URL to talk to a running instance instead.  All numeric output
is exact rational strings; decimal columns are outward-rounded upper bounds.

Exit codes: 0 success, 2 invalid input, 3 internal consistency violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import httpx
from pydantic import ValidationError

from .service import handlers, schemas

DEFAULT_MAX_ITER = 500
DEFAULT_PRECISION = "1e-30"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcf",
        description="Exact Jacobi-Perron expansions, convergents, and periodicity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--server", help="base URL of a running service; default is in-process")

    p = sub.add_parser("expand", help="run the expansion on an input tuple file")
    p.add_argument("input", help="JSON file: {generator?, values: [...]}")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common(p)

    p = sub.add_parser("convergents", help="dump the convergent table of a quotient stream")
    p.add_argument("input", help='JSON file: {"m": m, "quotients": [[...], ...]}')
    common(p)

    p = sub.add_parser("verify-forward", help="periodic quotients => recurrence, checked exactly")
    p.add_argument("input", help='JSON file: {"m", "pre", "period"} (or a list with --batch)')
    p.add_argument("--horizon", type=int, default=150)
    p.add_argument("--batch", action="store_true", help="input file holds a list of specs")
    common(p)

    p = sub.add_parser("verify-converse", help="fit recurrences, then test quotient periodicity")
    p.add_argument("input", help="JSON file: {generator?, values: [...]}")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--max-order", type=int, default=8)
    common(p)

    p = sub.add_parser("cubic", help="periodic ternary representation vs the expansion")
    p.add_argument("input", help='JSON file: {"p", "q", "r", "z"}')
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--max-order", type=int, default=12, help="fit order cap for both sides")
    p.add_argument("--precision", default=DEFAULT_PRECISION, help="interval width target")
    common(p)

    p = sub.add_parser("lrs-fit", help="minimal linear recurrence fitting a sequence")
    p.add_argument("input", help='JSON file: {"terms": [...]} or a bare list')
    p.add_argument(
        "--max-order",
        type=int,
        default=None,
        help="order cap (default: 8, lowered to what the sequence length can attest)",
    )
    common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _build_request(args):
    data = _read_json(args.input)
    if args.command == "expand":
        return schemas.ExpandRequest(**{**data, "max_iter": args.max_iter})
    if args.command == "convergents":
        return schemas.ConvergentsRequest(**data)
    if args.command == "verify-forward":
        if args.batch:
            specs = data if isinstance(data, list) else data["specs"]
            return schemas.VerifyForwardBatchRequest(specs=specs, horizon=args.horizon)
        return schemas.VerifyForwardRequest(spec=data, horizon=args.horizon)
    if args.command == "verify-converse":
        return schemas.VerifyConverseRequest(
            **{**data, "max_iter": args.max_iter, "max_order": args.max_order}
        )
    if args.command == "cubic":
        return schemas.CubicRequest(
            spec=data, depth=args.depth, fit_max_order=args.max_order, precision=args.precision
        )
    if args.command == "lrs-fit":
        terms = data if isinstance(data, list) else data["terms"]
        max_order = args.max_order
        if max_order is None:
            # a fit of order d is only attested with 2d + 4 terms in hand
            max_order = max(1, min(8, (len(terms) - 4) // 2))
        return schemas.LrsFitRequest(terms=terms, max_order=max_order)
    raise ValueError(f"unknown command {args.command}")


def _route(args) -> tuple[str, object, type]:
    batch = getattr(args, "batch", False)
    table = {
        "expand": ("/expand", handlers.expand, schemas.ExpansionReportModel),
        "convergents": ("/convergents", handlers.convergent_table, schemas.TableDumpModel),
        "verify-forward": ("/verify/forward", handlers.verify_forward, schemas.ForwardReportModel),
        "verify-converse": (
            "/verify/converse",
            handlers.verify_converse,
            schemas.ConverseReportModel,
        ),
        "cubic": ("/cubic", handlers.cubic, schemas.CubicReportModel),
        "lrs-fit": ("/lrs/fit", handlers.lrs_fit, schemas.LrsFitReportModel),
    }
    if args.command == "verify-forward" and batch:
        return (
            "/verify/forward/batch",
            handlers.verify_forward_batch,
            schemas.ForwardBatchReportModel,
        )
    return table[args.command]


def _call_remote(base_url: str, path: str, request, response_type):
    response = httpx.post(base_url.rstrip("/") + path, json=request.model_dump(), timeout=600.0)
    if response.status_code >= 400:
        detail = response.text
        code = 3 if response.status_code >= 500 else 2
        raise _RemoteError(code, f"server returned {response.status_code}: {detail}")
    return response_type.model_validate(response.json())


class _RemoteError(RuntimeError):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


# -- rendering ---------------------------------------------------------------


def _csv_rows(command: str, report) -> list[list]:
    if command == "expand":
        header = ["n"] + [f"a{i+1}" for i in range(report.m)]
        return [header] + [[n] + list(q) for n, q in enumerate(report.quotients)]
    if command == "convergents":
        header = (
            ["n"]
            + [f"A{i+1}" for i in range(report.m + 1)]
            + [f"conv{i+1}" for i in range(report.m)]
        )
        rows = []
        for row in report.rows:
            conv = row.convergent if row.convergent else [""] * report.m
            rows.append([row.n] + row.values + conv)
        return [header] + rows
    if command == "verify-forward":
        if isinstance(report, schemas.ForwardBatchReportModel):
            return [["index", "ok"]] + [[i, r.ok] for i, r in enumerate(report.reports)]
        return [["axis", "ok", "first_failure"]] + [
            [a.axis, a.ok, "" if a.first_failure is None else a.first_failure]
            for a in report.axes
        ]
    if command == "verify-converse":
        rows = [["axis", "fit_order", "fit_offset", "preperiod", "period"]]
        for i, fit in enumerate(report.fits):
            period = report.quotient_periods[i] if i < len(report.quotient_periods) else None
            rows.append(
                [
                    i + 1,
                    fit.order if fit else "",
                    fit.offset if fit else "",
                    period[0] if period else "",
                    period[1] if period else "",
                ]
            )
        return rows
    if command == "cubic":
        rows = [["n", "rep_err1", "rep_err2", "jacobi_err1", "jacobi_err2"]]
        jacobi = {r.n: r for r in report.jacobi_errors}
        for rep_row in report.rep_errors:
            jac_row = jacobi.get(rep_row.n)

            def col(row, axis):
                if row is None:
                    return ""
                bound = row.axis1 if axis == 1 else row.axis2
                return bound.decimal if bound else ""

            rows.append(
                [
                    rep_row.n,
                    col(rep_row, 1),
                    col(rep_row, 2),
                    col(jac_row, 1),
                    col(jac_row, 2),
                ]
            )
        return rows
    if command == "lrs-fit":
        if report.fit is None:
            return [["order"], ["no_fit"]]
        return [["k", "coeff"]] + [[k + 1, c] for k, c in enumerate(report.fit.coeffs)]
    raise ValueError(f"no csv rendering for {command}")


def _text_summary(command: str, report) -> str:
    if command == "expand":
        status = report.status
        detail = {
            "terminated": lambda: f"terminated at step {status.step}",
            "cycle": lambda: f"cycle detected: preperiod {status.preperiod}, length {status.cycle}",
            "truncated": lambda: f"truncated at max_iter {status.max_iter}",
        }[status.kind]()
        lines = [f"m = {report.m}, {len(report.quotients)} steps, {detail}"]
        lines += [f"  a_{n} = {tuple(q)}" for n, q in enumerate(report.quotients)]
        return "\n".join(lines)
    if command == "convergents":
        lines = [f"m = {report.m}, rows {report.rows[0].n}..{report.rows[-1].n}"]
        for row in report.rows:
            conv = f"  conv = ({', '.join(row.convergent)})" if row.convergent else ""
            lines.append(f"  n={row.n}: ({', '.join(row.values)}){conv}")
        return "\n".join(lines)
    if command == "verify-forward":
        if isinstance(report, schemas.ForwardBatchReportModel):
            return f"{report.passed}/{report.count} specs passed"
        axes = ", ".join(
            f"axis {a.axis}: {'pass' if a.ok else f'FAIL at n={a.first_failure}'}"
            for a in report.axes
        )
        poly = " + ".join(
            f"({c})x^{k}" for k, c in enumerate(report.char_poly) if c != "0"
        )
        return (
            f"u = {report.u}, char poly {poly}, det {report.determinant}\n"
            f"recurrence stride {report.recurrence.stride}, valid from n = "
            f"{report.recurrence.min_index}\n{axes}\noverall: {'pass' if report.ok else 'FAIL'}"
        )
    if command == "verify-converse":
        fit_txt = ", ".join(
            f"axis {i+1}: {'order ' + str(f.order) if f else 'no fit'}"
            for i, f in enumerate(report.fits)
        )
        period_txt = ", ".join(
            f"axis {i+1}: {p if p else 'not observed'}"
            for i, p in enumerate(report.quotient_periods)
        )
        verdict = {True: "consistent", False: "INCONSISTENT", None: "hypothesis not met"}[
            report.consistent
        ]
        return f"fits: {fit_txt}\nquotient periodicity: {period_txt}\nverdict: {verdict}"
    if command == "cubic":
        last = report.rep_errors[-1]
        rep_last = last.axis1.decimal if last.axis1 else "n/a"
        fit_orders = [f.order if f else None for f in report.rep_fits]
        jac_orders = [f.order if f else None for f in report.jacobi_fits]
        lines = [
            f"depth {report.depth}; N: tr={report.n_matrix.trace} "
            f"det={report.n_matrix.determinant} I1={report.n_matrix.second_invariant}",
            f"representation error (axis 1) at n={last.n}: <= {rep_last}",
            f"fit orders: representation {fit_orders}, expansion {jac_orders}",
        ]
        lines += [f"note: {note}" for note in report.notes]
        return "\n".join(lines)
    if command == "lrs-fit":
        if report.fit is None:
            return "no recurrence of the requested order fits"
        f = report.fit
        terms = " + ".join(f"({c})*s[n-{k+1}]" for k, c in enumerate(f.coeffs))
        return f"order {f.order}, valid for n >= {f.offset}: s[n] = {terms}"
    raise ValueError(f"no text rendering for {command}")


def _render(args, report) -> str:
    if args.format == "json":
        return json.dumps(report.model_dump(), indent=2)
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerows(_csv_rows(args.command, report))
        return buffer.getvalue().rstrip("\n")
    return _text_summary(args.command, report)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        request = _build_request(args)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValidationError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2

    path, handler, response_type = _route(args)
    try:
        if args.server:
            report = _call_remote(args.server, path, request, response_type)
        else:
            report = handler(request)
    except _RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ArithmeticError as exc:
        print(f"error: internal consistency violation: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2

    print(_render(args, report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
