"""Command-line entry point.

    recurspec recurrence solve --coeffs a0,a1,... --initial x0,x1,... [--eval N]
    recurspec vandermonde invert|det --nodes FILE
    recurspec markov analyze --matrix FILE [--epsilon 1e-6]
    recurspec graph diameter-bound --edges FILE [--construction uniform|lazy]
    recurspec graph chung --m M --k K --tau T
    recurspec spectral eigs --matrix FILE

Every command prints one JSON report on stdout. Exit codes: 0 ok, 2 bad
input, 3 hypotheses of the bounds not met, 4 numerical failure, 64 unknown command.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import graphs, markov, recurrence, spectral, vandermonde
from .errors import HypothesisError, NumericalError, ValidationError
from .numkernel import as_complex, is_real

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_NUMERICAL, EXIT_USAGE = 0, 2, 3, 4, 64

COMMANDS = {
    "recurrence": ("solve",),
    "vandermonde": ("invert", "det"),
    "markov": ("analyze",),
    "graph": ("diameter-bound", "chung"),
    "spectral": ("eigs",),
}


# ---------------------------------------------------------------- serialisation

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def dumps(obj) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    obj = _plain(obj)
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, list):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.results: dict = {}
        self.diagnostics: list[dict] = []
        self.residuals: dict = {}

    def note(self, level: str, message: str):
        self.diagnostics.append({"level": level, "message": message})

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_echo": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "residuals": self.residuals,
        }


# ---------------------------------------------------------------- input parsing

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def load_matrix(path: str) -> list[list[float]]:
    """JSON 2-D array or CSV of reals."""
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
        try:
            data = [[float(v) for v in r] for r in rows]
        except ValueError as exc:
            raise ValidationError(f"{path}: not a JSON or CSV matrix ({exc})") from None
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValidationError(f"{path}: expected a 2-D array")
    return data


def load_nodes(path: str) -> list[complex]:
    """JSON list of reals or [re, im] pairs."""
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, dict):
        data = data.get("nodes")
    if not isinstance(data, list):
        raise ValidationError(f"{path}: expected a list of nodes")
    return [as_complex(v) for v in data]


def load_edges(path: str) -> list[tuple[int, int]]:
    """JSON list of pairs, or one whitespace-separated ``i j`` pair per line."""
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 'i j'")
            data.append(parts)
    try:
        return [(int(i), int(j)) for i, j in data]
    except (TypeError, ValueError):
        raise ValidationError(f"{path}: edges must be integer pairs") from None


def parse_scalars(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad number list {text!r}: {exc}") from None


def _scalar_out(z: complex):
    """Real-looking values print as plain floats; the rest as [re, im]."""
    return z.real if is_real(z) else z


# ---------------------------------------------------------------- commands

def cmd_recurrence_solve(args, report: Report):
    rec = recurrence.Recurrence(tuple(parse_scalars(args.coeffs)), tuple(parse_scalars(args.initial)))
    report.inputs.update(coeffs=list(rec.coeffs), initial=list(rec.initial), eval=args.eval)
    cf = recurrence.solve_closed_form(rec)
    m = rec.order
    horizon = max(2 * m, args.eval or 0)
    xs = recurrence.iterate(rec, horizon)
    report.results["roots"] = list(cf.roots.roots)
    report.results["coefficients"] = list(cf.coefficients)
    if args.eval is not None:
        report.results["terms"] = [_scalar_out(recurrence.evaluate_closed_form(cf, n))
                                   for n in range(args.eval + 1)]
    V = vandermonde.vandermonde_matrix(cf.roots)
    direct = np.linalg.solve(V, np.asarray(xs[1:m + 1]))
    scale = max(float(np.abs(direct).max()), 1e-300)
    report.residuals["iteration_relative"] = recurrence.closed_form_residual(cf, xs)
    report.residuals["linear_solve_relative"] = float(np.abs(direct - cf.coefficients).max() / scale)
    return EXIT_OK


def _nodes_report(args, report: Report):
    nodes = load_nodes(args.nodes)
    report.inputs["nodes"] = nodes
    return nodes


def cmd_vandermonde_invert(args, report: Report):
    nodes = _nodes_report(args, report)
    W = vandermonde.vandermonde_inverse(nodes)
    V = vandermonde.vandermonde_matrix(nodes)
    report.results["inverse"] = [[_scalar_out(complex(w)) for w in row] for row in W]
    report.residuals["WV_minus_I_max"] = float(np.abs(W @ V - np.eye(len(nodes))).max())
    ref = np.linalg.inv(V)
    report.residuals["elimination_relative"] = float(np.abs(W - ref).max() / np.abs(ref).max())
    return EXIT_OK


def cmd_vandermonde_det(args, report: Report):
    nodes = _nodes_report(args, report)
    det = vandermonde.vandermonde_det(nodes)
    report.results["det"] = _scalar_out(det)
    if nodes:
        ref = complex(np.linalg.det(vandermonde.vandermonde_matrix(nodes)))
        report.residuals["elimination_relative"] = abs(det - ref) / max(abs(ref), 1e-300)
    return EXIT_OK


def _spectrum_dict(spec: spectral.Spectrum) -> dict:
    return {
        "eigenvalues": list(spec.eigenvalues.roots),
        "all_simple": spec.all_simple,
        "all_nonzero": spec.all_nonzero,
        "dominant": spec.dominant,
    }


def cmd_markov_analyze(args, report: Report):
    grid = load_matrix(args.matrix)
    report.inputs.update(matrix=grid, epsilon=args.epsilon)
    if not 0 < args.epsilon < 1:
        raise ValidationError("--epsilon must lie in (0, 1)")
    tm = markov.validate(grid)
    st = markov.structure(tm)
    res = report.results
    res["structure"] = {"irreducible": st.irreducible, "period": st.period, "aperiodic": st.aperiodic}
    checks = {"irreducible": st.irreducible, "aperiodic": st.aperiodic}
    res["hypothesis_checks"] = checks
    try:
        spec = markov.markov_spectrum(tm)
        checks["dominant_is_one"] = True
    except HypothesisError:
        spec = spectral.eigenvalues(tm.P)
        checks["dominant_is_one"] = False
    checks["simple"] = spec.all_simple
    checks["nonzero"] = spec.all_nonzero
    res["spectrum"] = _spectrum_dict(spec)

    bound = markov.convergence_bound(tm)
    res["hypothesis_ok"] = bound.hypothesis_ok
    if not bound.hypothesis_ok:
        report.note("error", f"hypotheses not met ({bound.failure_reason})")
        return EXIT_HYPOTHESIS

    sd = markov.stationary(tm)
    res["pi"] = sd.pi
    res["rho"] = bound.rho
    res["phi_grid"] = bound.phi
    res["phi_max"] = bound.phi_max
    res["psi"] = bound.psi
    res["mixing_time_phi"] = markov.mixing_time(tm, args.epsilon, "phi-max")
    res["mixing_time_psi"] = markov.mixing_time(tm, args.epsilon, "psi")

    powers = spectral.matrix_powers(tm.P, 40)
    slack_phi = max(float((np.abs(Pn - sd.pi) - bound.phi * bound.rho ** n).max())
                    for n, Pn in enumerate(powers, 1))
    slack_psi = max(float((np.abs(Pn - sd.pi) - bound.psi * bound.rho ** (n - 1)).max())
                    for n, Pn in enumerate(powers, 1))
    pi_gap = 0.0
    for i in range(tm.m):
        for j in range(tm.m):
            cf = spectral.power_entry_closed_form(tm.P, i, j, spectrum=spec)
            pi_gap = max(pi_gap, abs(cf.coefficients[0] - sd.pi[j]))
    res["oracle_residuals"] = {
        "stationary": sd.residual,
        "power_iteration": sd.power_gap,
        "phi_bound_excess_max": slack_phi,
        "psi_bound_excess_max": slack_psi,
        "closed_form_pi": pi_gap,
    }
    report.residuals.update(res["oracle_residuals"])
    return EXIT_OK


def cmd_graph_diameter_bound(args, report: Report):
    edges = load_edges(args.edges)
    report.inputs.update(edges=[list(e) for e in edges], construction=args.construction,
                         vertices=args.vertices)
    G = graphs.Digraph.from_edges(edges, args.vertices)
    if args.construction == "lazy":
        P = graphs.markov_matrix_lazy_undirected(G)
        # the added self-loops leave the diameter unchanged
        G = graphs.Digraph.from_adjacency(P.support())
    else:
        P = graphs.markov_matrix_uniform(G)
    rep = graphs.diameter_bound(G, P)
    res = report.results
    res["exact"] = rep.exact
    res["hypothesis_ok"] = rep.hypothesis_ok
    if not rep.hypothesis_ok:
        report.note("error", f"hypotheses not met ({rep.failure_reason})")
        return EXIT_HYPOTHESIS
    res["bound"] = rep.bound
    res["per_j_terms"] = rep.per_j_terms
    res["rho"] = rep.rho
    res["pi"] = rep.pi
    res["phi_max"] = rep.phi_max
    if math.isfinite(rep.exact):
        report.residuals["bound_minus_exact"] = float(rep.bound - rep.exact)
    return EXIT_OK


def cmd_graph_chung(args, report: Report):
    report.inputs.update(m=args.m, k=args.k, tau=args.tau)
    report.results["bound"] = graphs.chung_bound(args.m, args.k, args.tau)
    return EXIT_OK


def cmd_spectral_eigs(args, report: Report):
    grid = load_matrix(args.matrix)
    report.inputs["matrix"] = grid
    A = spectral.as_square(np.array(grid, dtype=float))
    p = spectral.char_poly(A)
    spec = spectral.eigenvalues(A)
    report.results["char_poly"] = list(p.coeffs)
    report.results.update(_spectrum_dict(spec))
    report.results["rho"] = spec.rho
    m = A.shape[0]
    ch = float(np.abs(spectral.poly_at_matrix(p, A)).max())
    report.residuals["cayley_hamilton_scaled"] = ch / (1 + float(np.abs(A).max())) ** m
    report.residuals["trace"] = abs(np.trace(A) - sum(spec.eigenvalues.roots))
    return EXIT_OK


HANDLERS = {
    ("recurrence", "solve"): cmd_recurrence_solve,
    ("vandermonde", "invert"): cmd_vandermonde_invert,
    ("vandermonde", "det"): cmd_vandermonde_det,
    ("markov", "analyze"): cmd_markov_analyze,
    ("graph", "diameter-bound"): cmd_graph_diameter_bound,
    ("graph", "chung"): cmd_graph_chung,
    ("spectral", "eigs"): cmd_spectral_eigs,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recurspec", description=__doc__.splitlines()[0])
    parser.add_argument("--human", action="store_true", help="render a text summary instead of JSON")
    groups = parser.add_subparsers(dest="group", required=True)

    sub = groups.add_parser("recurrence").add_subparsers(dest="action", required=True)
    p = sub.add_parser("solve")
    p.add_argument("--coeffs", required=True, help="a0,a1,...,a_{m-1}")
    p.add_argument("--initial", required=True, help="x0,x1,...,x_{m-1}")
    p.add_argument("--eval", type=int, default=None, metavar="N")

    sub = groups.add_parser("vandermonde").add_subparsers(dest="action", required=True)
    for name in ("invert", "det"):
        sub.add_parser(name).add_argument("--nodes", required=True)

    sub = groups.add_parser("markov").add_subparsers(dest="action", required=True)
    p = sub.add_parser("analyze")
    p.add_argument("--matrix", required=True)
    p.add_argument("--epsilon", type=float, default=1e-6)

    sub = groups.add_parser("graph").add_subparsers(dest="action", required=True)
    p = sub.add_parser("diameter-bound")
    p.add_argument("--edges", required=True)
    p.add_argument("--construction", choices=("uniform", "lazy"), default="uniform")
    p.add_argument("--vertices", type=int, default=None)
    p = sub.add_parser("chung")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)

    sub = groups.add_parser("spectral").add_subparsers(dest="action", required=True)
    sub.add_parser("eigs").add_argument("--matrix", required=True)
    return parser


def _human(report: dict) -> str:
    lines = [f"== {report['command']} =="]
    for section in ("results", "residuals"):
        if report[section]:
            lines.append(f"[{section}]")
            for key, value in report[section].items():
                lines.append(f"  {key:<24} {dumps(value)}")
    for d in report["diagnostics"]:
        lines.append(f"{d['level']}: {d['message']}")
    return "\n".join(lines)


def _command_words(argv: list[str]) -> list[str]:
    return [a for a in argv if not a.startswith("-")][:2]


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    words = _command_words(argv)
    if len(words) < 2 or words[0] not in COMMANDS or words[1] not in COMMANDS[words[0]]:
        stderr.write(parser.format_usage())
        stderr.write("commands: " + "; ".join(f"{g} {a}" for g, acts in COMMANDS.items()
                                              for a in acts) + "\n")
        return EXIT_USAGE
    human = "--human" in argv
    argv = [a for a in argv if a != "--human"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    report = Report(f"{args.group} {args.action}", {})
    try:
        code = HANDLERS[(args.group, args.action)](args, report)
    except ValidationError as exc:
        report.note("error", str(exc))
        code = EXIT_INPUT
    except HypothesisError as exc:
        report.results = {"hypothesis_ok": False}
        report.note("error", f"{exc.reason}: {exc}")
        code = EXIT_HYPOTHESIS
    except NumericalError as exc:
        report.results = {}
        report.note("error", str(exc))
        code = EXIT_NUMERICAL
    out = report.as_dict()
    stdout.write((_human(out) if human else dumps(out)) + "\n")
    if code != EXIT_OK:
        stderr.write(f"recurspec: {report.diagnostics[-1]['message']}\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
