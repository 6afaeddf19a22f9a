"""Command-line front end: ``gkzcm {toric,classify,table,umbrella,resolve}``.

Results go to standard output; logging and progress go to standard error,
at the level named by the ``GKZCM_LOG`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources

from .errors import GkzError, MatrixValidationError, ParseError
from .gkz import CMReport, classify
from .groebner import MAX_DIMENSION_VARS, Ideal
from .poly import PolyRing, format_rational, parse_terms, to_rational
from .resolution import BettiTable, homological_summary, minimal_free_resolution
from .toric import IntegerMatrix, lattice_kernel, toric_ideal, umbrella, umbrella_consistency_check

log = logging.getLogger("gkzcm")

FORMATS = ("text", "json", "csv", "markdown")
COMMANDS = ("toric", "classify", "table", "umbrella", "resolve")
VERDICT_KEYS = ("semigroup_ring", "groebner_deformation", "gkz")
COLUMN_TITLES = ("C[NA]", "R/in I_A", "S/in_(1,1) H_A(beta)")

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    matrix: str | None = None
    file: str | None = None
    beta: tuple | None = None
    format: str = "text"
    box: int | None = None
    max_vars: int = MAX_DIMENSION_VARS
    jobs: int = 1
    weights: tuple | None = None
    variables: tuple | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if (self.matrix is None) == (self.file is None):
            raise ValueError("give exactly one input source")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")

    def read_input(self):
        if self.matrix is not None:
            return self.matrix
        with open(self.file, encoding="utf-8") as fh:
            return fh.read()


def parse_matrix(text) -> IntegerMatrix:
    """``"0 1 2 2; 2 1 1 0"`` to a validated matrix.

    Raises :class:`MatrixValidationError` whose ``violation`` names the
    failed assumption.
    """
    return IntegerMatrix.parse(text)


def parse_vector(text):
    return tuple(to_rational(t) for t in text.replace(",", " ").split())


def _cm(flag):
    return "CM" if flag else "not CM"


def _batch_lines(text):
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


# ---------------------------------------------------------------------------
# reports


def report_dict(report: CMReport) -> dict:
    return {
        "matrix": report.matrix.tolist(),
        "beta": [format_rational(b) for b in report.beta],
        "verdicts": dict(zip(VERDICT_KEYS, report.verdicts)),
        "summaries": {k: report.summaries[k].as_dict() for k in VERDICT_KEYS},
        "betti": {k: report.betti[k].triples() for k in VERDICT_KEYS},
        "diagnostics": dict(report.diagnostics),
    }


def load_schema() -> dict:
    text = resources.files("gkzcm").joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(data: dict):
    import jsonschema

    jsonschema.validate(data, load_schema())


def _matrix_text(rows):
    return "; ".join(" ".join(str(x) for x in r) for r in rows)


def _number_cells(data):
    out = []
    for k in VERDICT_KEYS:
        s = data["summaries"][k]
        out += [s["dim"], s["depth"], s["pd"]]
    return out


def _number_headers():
    return [f"{f}_{k}" for k in VERDICT_KEYS for f in ("dim", "depth", "pd")]


def _text_report(data):
    lines = [f"A    = {_matrix_text(data['matrix'])}", f"beta = {' '.join(data['beta'])}", ""]
    w = max(len(t) for t in COLUMN_TITLES)
    lines.append(f"{'':{w}}  {'verdict':7} {'dim':>4} {'depth':>6} {'pd':>4}")
    for title, k in zip(COLUMN_TITLES, VERDICT_KEYS):
        s = data["summaries"][k]
        lines.append(f"{title:{w}}  {_cm(data['verdicts'][k]):7} {s['dim']:>4} {s['depth']:>6} {s['pd']:>4}")
    lines.append("")
    lines.append("diagnostics:")
    for key in sorted(data["diagnostics"]):
        lines.append(f"  {key}: {json.dumps(data['diagnostics'][key])}")
    for title, k in zip(COLUMN_TITLES, VERDICT_KEYS):
        table = BettiTable({(t["i"], tuple(t["degree"])): t["value"] for t in data["betti"][k]})
        lines.append("")
        lines.append(f"Betti numbers of {title}:")
        lines.append(table.format())
    return "\n".join(lines) + "\n"


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _markdown(header, rows):
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="text") -> str:
    """Serialize a :class:`CMReport` (or its dict form) deterministically."""
    data = report if isinstance(report, dict) else report_dict(report)
    if fmt == "json":
        validate_report(data)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _text_report(data)
    verdicts = [_cm(data["verdicts"][k]) for k in VERDICT_KEYS]
    row = [_matrix_text(data["matrix"]), " ".join(data["beta"])] + verdicts + _number_cells(data)
    header = ["matrix", "beta", *COLUMN_TITLES, *_number_headers()]
    if fmt == "csv":
        return _csv([header, row])
    if fmt == "markdown":
        return _markdown(header, [row])
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# batch tables


def _table_row(job):
    """Classify one batch line; never raises, so the pool always returns."""
    text, beta, box, max_vars = job
    try:
        A = parse_matrix(text)
        rep = classify(A, beta, box=box, max_vars=max_vars)
        return {"input": text, "status": "ok", "report": report_dict(rep)}
    except MatrixValidationError as exc:
        return {"input": text, "status": "invalid", "violation": exc.violation, "message": str(exc)}
    except (GkzError, ValueError) as exc:
        name = type(exc).__name__
        return {"input": text, "status": "invalid", "violation": name, "message": f"{name}: {exc}"}
    except Exception as exc:  # reported as an internal error row
        name = type(exc).__name__
        return {"input": text, "status": "error", "violation": name, "message": f"{name}: {exc}"}


def run_rows(lines, beta=None, box=None, max_vars=MAX_DIMENSION_VARS, jobs=1):
    """Results for each batch line, in input order."""
    work = [(line, beta, box, max_vars) for line in lines]
    if jobs <= 1 or len(work) <= 1:
        results = []
        for k, job in enumerate(work, start=1):
            results.append(_table_row(job))
            log.info("row %d/%d done", k, len(work))
        return results
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = []
        for k, res in enumerate(pool.map(_table_row, work), start=1):
            results.append(res)
            log.info("row %d/%d done", k, len(work))
        return results


def render_table(results, fmt="text") -> str:
    header = ["#", "A", *COLUMN_TITLES]
    rows = []
    for k, res in enumerate(results, start=1):
        if res["status"] == "ok":
            v = res["report"]["verdicts"]
            rows.append([str(k), res["input"], *(_cm(v[key]) for key in VERDICT_KEYS)])
        else:
            rows.append([str(k), res["input"], f"error: {res['message']}", "", ""])
    if fmt == "json":
        out = []
        for k, res in enumerate(results, start=1):
            item = {"row": k, **res}
            if res["status"] == "ok":
                validate_report(res["report"])
            out.append(item)
        return json.dumps({"rows": out}, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        head = header + _number_headers()
        body = []
        for row, res in zip(rows, results):
            nums = _number_cells(res["report"]) if res["status"] == "ok" else [""] * 9
            body.append(row + nums)
        return _csv([head] + body)
    if fmt == "markdown":
        return _markdown(header, rows)
    ok_rows = [r for r, res in zip(rows, results) if res["status"] == "ok"]
    widths = [max(len(r[i]) for r in [header] + ok_rows) for i in range(len(header))]
    widths[1] = max([widths[1]] + [len(r[1]) for r in rows])
    lines = []
    for r in [header] + rows:
        cells = r if r[3] or r is header else r[:3]
        lines.append("  ".join(c.ljust(w) if i else c.rjust(w)
                               for i, (c, w) in enumerate(zip(cells, widths))).rstrip())
    return "\n".join(lines) + "\n"


def _exit_code(results):
    if any(r["status"] == "error" for r in results):
        return EXIT_INTERNAL
    if any(r["status"] == "invalid" for r in results):
        return EXIT_INVALID
    return EXIT_OK


def run_table(batch_file, beta=None, fmt="text", jobs=1, box=None, max_vars=MAX_DIMENSION_VARS):
    """Render the verdict table for a file of matrices, one per line.

    Returns ``(text, exit_code)``; invalid rows are shown inline.
    """
    with open(batch_file, encoding="utf-8") as fh:
        lines = _batch_lines(fh.read())
    results = run_rows(lines, beta, box, max_vars, jobs)
    return render_table(results, fmt), _exit_code(results)


# ---------------------------------------------------------------------------
# other commands


def _toric_output(A, fmt):
    I = toric_ideal(A)
    kernel = lattice_kernel(A)
    gens = [g.format() for g in I.generators]
    if fmt == "json":
        return json.dumps({"matrix": A.tolist(), "kernel": [list(u) for u in kernel],
                           "generators": gens}, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv([["generator"]] + [[g] for g in gens])
    if fmt == "markdown":
        return _markdown(["generator"], [[g] for g in gens])
    lines = [f"A = {A}", "lattice basis of ker A:"]
    lines += [f"  {list(u)}" for u in kernel]
    lines.append(f"reduced Groebner basis of I_A ({len(gens)} elements):")
    lines += [f"  {g}" for g in gens]
    return "\n".join(lines) + "\n"


def _face_label(face):
    return "{" + ",".join(str(j) for j in sorted(face)) + "}"


def _umbrella_output(A, weights, fmt):
    U = umbrella(A, weights)
    check = umbrella_consistency_check(A, weights)
    faces = sorted(U.faces, key=lambda f: (len(f), sorted(f)))
    rows = [[_face_label(f), " ".join(format_rational(c) for c in U.faces[f]), str(f in U.top_faces)]
            for f in faces]
    if fmt == "json":
        return json.dumps({
            "matrix": A.tolist(),
            "faces": [{"face": sorted(f), "covector": [format_rational(c) for c in U.faces[f]],
                       "top": f in U.top_faces} for f in faces],
            "consistent": check.ok,
        }, indent=2, sort_keys=True) + "\n"
    header = ["face", "covector", "top"]
    if fmt == "csv":
        return _csv([header] + rows)
    if fmt == "markdown":
        return _markdown(header, rows)
    lines = [f"A = {A}", f"faces avoiding the origin ({len(faces)}):"]
    lines += [f"  {r[0]:<12} covector ({r[1]}){'  top' if r[2] == 'True' else ''}" for r in rows]
    lines.append(f"in I_A inside every R I_tau + J_tau: {check.ok}")
    return "\n".join(lines) + "\n"


def _natural_key(name):
    m = re.fullmatch(r"(.*?)(\d*)", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def parse_ideal(text, variables=None, grading=None) -> Ideal:
    """Comma-separated generators; variables default to those that occur."""
    pieces = [p for p in text.replace("\n", ",").split(",") if p.strip()]
    if not pieces:
        raise ParseError("no generators given")
    if variables is None:
        seen = {name for p in pieces if p.strip() != "0" for _, fs in parse_terms(p) for name, _ in fs}
        variables = sorted(seen, key=_natural_key)
        if not variables:
            raise ParseError("constant generators only; pass --vars")
    ring = PolyRing(list(variables), grading)
    return Ideal.parse(pieces, ring)


def _resolve_output(I, fmt, max_vars):
    res = minimal_free_resolution(I)
    s = homological_summary(I, max_vars, resolution=res)
    if fmt == "json":
        return json.dumps({"variables": list(I.ring.names), "betti": res.betti.triples(),
                           "summary": s.as_dict()}, indent=2, sort_keys=True) + "\n"
    header = ["i", "degree", "value"]
    rows = [[t["i"], " ".join(str(x) for x in t["degree"]), t["value"]] for t in res.betti.triples()]
    if fmt == "csv":
        return _csv([header] + rows)
    if fmt == "markdown":
        return _markdown(header, rows)
    lines = [f"ring: QQ[{', '.join(I.ring.names)}]", res.betti.format(), ""]
    lines.append(" ".join(f"{k}={v}" for k, v in s.as_dict().items()))
    return "\n".join(lines) + "\n"


def _single_input(text):
    lines = _batch_lines(text)
    if len(lines) != 1:
        raise MatrixValidationError("empty", f"expected one matrix, got {len(lines)} lines")
    return lines[0]


def execute(cfg: RunConfig):
    """Run a command; returns ``(stdout_text, exit_code)``."""
    if cfg.command == "table":
        if cfg.file is not None:
            return run_table(cfg.file, cfg.beta, cfg.format, cfg.jobs, cfg.box, cfg.max_vars)
        results = run_rows(_batch_lines(cfg.matrix), cfg.beta, cfg.box, cfg.max_vars, cfg.jobs)
        return render_table(results, cfg.format), _exit_code(results)
    text = cfg.read_input()
    if cfg.command == "resolve":
        return _resolve_output(parse_ideal(text, cfg.variables), cfg.format, cfg.max_vars), EXIT_OK
    A = parse_matrix(_single_input(text))
    if cfg.command == "toric":
        return _toric_output(A, cfg.format), EXIT_OK
    if cfg.command == "umbrella":
        return _umbrella_output(A, list(cfg.weights) if cfg.weights else None, cfg.format), EXIT_OK
    rep = classify(A, cfg.beta, box=cfg.box, max_vars=cfg.max_vars)
    return emit_report(rep, cfg.format), EXIT_OK


def configure_logging():
    level = os.environ.get("GKZCM_LOG", "WARNING").strip().upper()
    value = int(level) if level.isdigit() else logging.getLevelName(level)
    if not isinstance(value, int):
        value = logging.WARNING
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("gkzcm: %(levelname)s: %(message)s"))
    root = logging.getLogger("gkzcm")
    root.handlers[:] = [handler]
    root.setLevel(value)


def build_parser():
    p = argparse.ArgumentParser(prog="gkzcm", description="Cohen-Macaulay tests for toric rings and GKZ systems.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "toric": "toric ideal I_A of a matrix",
        "classify": "the three Cohen-Macaulay verdicts with diagnostics",
        "table": "verdict table for a file of matrices, one per line",
        "umbrella": "faces of conv(0, a_j/L_j) avoiding the origin",
        "resolve": "Betti table of an ideal given by generators",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        src = sp.add_mutually_exclusive_group(required=True)
        if name == "resolve":
            src.add_argument("--ideal", dest="matrix", help='generators, e.g. "x1^2 - x2*x3, x1*x2"')
            sp.add_argument("--vars", help="variable names in order (default: those that occur)")
        else:
            src.add_argument("--matrix", help='rows separated by ";", e.g. "0 1 2 2; 2 1 1 0"')
        src.add_argument("--file", help="read the input from a file")
        sp.add_argument("--format", choices=FORMATS, default="text")
        sp.add_argument("--max-vars", type=int, default=MAX_DIMENSION_VARS,
                        help="largest ring for the exhaustive dimension search")
        if name in ("classify", "table"):
            sp.add_argument("--beta", help='parameter vector, e.g. "1/2 0" (default: zero)')
            sp.add_argument("--box", type=int, help="verification bound for the semigroup criterion")
        if name == "table":
            sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "umbrella":
            sp.add_argument("--weights", help="positive weights L_1..L_n (default: all 1)")
    return p


def config_from_args(ns) -> RunConfig:
    return RunConfig(
        command=ns.command,
        matrix=ns.matrix,
        file=ns.file,
        beta=parse_vector(ns.beta) if getattr(ns, "beta", None) else None,
        format=ns.format,
        box=getattr(ns, "box", None),
        max_vars=ns.max_vars,
        jobs=getattr(ns, "jobs", 1),
        weights=parse_vector(ns.weights) if getattr(ns, "weights", None) else None,
        variables=tuple(ns.vars.replace(",", " ").split()) if getattr(ns, "vars", None) else None,
    )


def main(argv=None) -> int:
    configure_logging()
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        out, code = execute(cfg)
    except (GkzError, ValueError, OSError) as exc:
        print(f"gkzcm: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:
        log.exception("internal error")
        print(f"gkzcm: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
