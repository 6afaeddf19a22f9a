"""Records every Groebner basis the engine hands back, and prints the acceptance summary.

Candidate bases that the variable-order search computes and then discards
are not recorded; the basis it returns is.
"""

from gkzcm import _engine

ENGINE_RUNS = {}
ACCEPTANCE = {}

_buchberger = _engine.buchberger
_fastest_basis = _engine.fastest_basis
_searching = [0]


def _record(polys, alg, out):
    key = (type(alg).__name__, repr(alg.order), getattr(getattr(alg, "algebra", None), "names", None),
           tuple(sorted(tuple(sorted(t.items())) for t in out)))
    ENGINE_RUNS.setdefault(key, (polys, alg, out))


def _recording_buchberger(polys, alg, max_reductions=None):
    out = _buchberger(polys, alg, max_reductions)
    if not _searching[0]:
        _record(polys, alg, out)
    return out


def _recording_fastest_basis(polys, algs, start_budget=64):
    _searching[0] += 1
    try:
        idx, gb = _fastest_basis(polys, algs, start_budget)
    finally:
        _searching[0] -= 1
    _record(polys, algs[idx], gb)
    return idx, gb


_engine.buchberger = _recording_buchberger
_engine.fastest_basis = _recording_fastest_basis


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}")
