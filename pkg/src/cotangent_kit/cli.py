"""Command line front end: ``cotangent-kit <command> FILE [options]``.

Exit status 0 means everything asked for was computed, 2 that a bound cut
the computation short (output is still written), 1 an input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__
from .algebra_core import format_rational
from .ci_analysis import MAHLER_LENGTH, MAHLER_R_MAX, Analysis, classify
from .groebner import NotProperIdealError
from .ideal_file import IdealFile, IdealFileError, parse_ideal_file
from .koszul_tor import t3_via_koszul
from .resolution import TruncationError, projective_dimension
from .series_lab import SeriesError, mahler_zero_pattern, parse_sequence, poincare_from_deviations
from .tate import BoundExhaustedError

EXIT_OK, EXIT_INPUT, EXIT_TRUNCATED = 0, 1, 2

COMMANDS = ("invariants", "resolve", "koszul", "tate", "cotangent", "deviations", "poincare", "alpha", "mahler", "ci-check", "report")


class Document:
    def __init__(self, command: str, args, source: Optional[IdealFile]):
        self.command = command
        self.args = args
        self.source = source
        self.tables: Dict[str, List[dict]] = {}
        self.reports: Dict[str, object] = {}
        self.incomplete: List[str] = []

    def to_json(self) -> dict:
        doc = {
            "tool": {"name": "cotangent-kit", "version": __version__},
            "command": self.command,
            "bounds": {"hom": self.args.hom_bound, "deg": self.args.deg_bound, "series": self.args.series_order},
            "tables": self.tables,
            "reports": self.reports,
            "complete": not self.incomplete,
            "incomplete": list(self.incomplete),
        }
        if self.source is not None:
            ideal = self.source.ideal
            doc["ring"] = {"variables": list(ideal.ring.variable_names), "weights": list(ideal.ring.degrees), "field": "Q"}
            doc["ideal"] = {
                "generators": [str(g) for g in ideal.generators],
                "file": self.source.source_name,
                "sha256": self.source.sha256,
                "flags": self.source.flags,
            }
        else:
            doc["ring"] = None
            doc["ideal"] = None
        return doc


def _canon(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


def to_json_text(doc: dict) -> str:
    return json.dumps(_canon(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _grid(rows: List[dict]) -> List[str]:
    """Betti-style grid: one line per i, one column per t."""
    if not rows or any("i" not in r or "t" not in r for r in rows):
        return ["```json", json.dumps(_canon(rows), sort_keys=True), "```"]
    ts = sorted({r["t"] for r in rows})
    is_ = sorted({r["i"] for r in rows})
    cell = {(r["i"], r["t"]): r["dim"] for r in rows}
    out = ["| i \\ t | " + " | ".join(str(t) for t in ts) + " |", "|---" * (len(ts) + 1) + "|"]
    for i in is_:
        out.append(f"| {i} | " + " | ".join("" if (i, t) not in cell else str(cell[(i, t)]) for t in ts) + " |")
    return out


def to_markdown(doc: dict) -> str:
    doc = _canon(doc)
    lines = [f"# cotangent-kit {doc['command']}", ""]
    if doc.get("ideal"):
        lines.append(f"- ring: Q[{', '.join(doc['ring']['variables'])}] with weights {doc['ring']['weights']}")
        lines.append(f"- ideal: ({', '.join(doc['ideal']['generators'])})")
        lines.append(f"- file: {doc['ideal']['file']} (sha256 {doc['ideal']['sha256']})")
    b = doc["bounds"]
    lines.append(f"- bounds: hom {b['hom']}, deg {b['deg']}, series {b['series']}")
    lines.append(f"- tool version: {doc['tool']['version']}")
    if doc["incomplete"]:
        lines.append(f"- incomplete: {'; '.join(doc['incomplete'])}")
    lines.append("")
    for name in sorted(doc["tables"]):
        lines += [f"## {name}", ""] + _grid(doc["tables"][name]) + [""]
    for name in sorted(doc["reports"]):
        lines += [f"## {name}", "", "```json", json.dumps(doc["reports"][name], sort_keys=True, indent=2), "```", ""]
    return "\n".join(lines)


# --- commands -----------------------------------------------------------


def _series_rows(coeffs) -> List[dict]:
    return [{"i": 0, "t": t, "dim": c} for t, c in enumerate(coeffs)]


def cmd_invariants(A: Analysis, doc: Document):
    inv = A.invariants
    doc.tables["hilbert_S"] = _series_rows(inv.hilbert_series_S.coeffs)
    doc.reports["invariants"] = {
        "mu": inv.mu,
        "height": inv.height,
        "krull_dim_S": inv.krull_dim_S,
        "minimal_generators": [str(g) for g in inv.minimal_generators],
        "groebner_basis": [str(g) for g in A.gb.elements],
        "degenerate": inv.degenerate,
        "notes": inv.notes,
    }


def cmd_resolve(A: Analysis, doc: Document):
    if doc.args.module == "S":
        C, B = A.resolution_R
        pd = projective_dimension(B)
        doc.tables["betti"] = B.rows()
        doc.tables["tor"] = A.tor.rows()
        rep = {"over_ring": "R", "module": "S", "totals": B.totals(), "minimal": C.is_minimal(), "projective_dimension": pd}
        if pd is None:
            doc.incomplete.append("resolution of S may continue past the hom bound")
    else:
        C, B = A.resolution_K
        doc.tables["betti"] = B.rows()
        rep = {"over_ring": "S", "module": "K", "totals": B.totals(), "minimal": C.is_minimal()}
    rep["truncation"] = list(B.truncation)
    doc.reports["resolution"] = rep


def cmd_koszul(A: Analysis, doc: Document):
    KH = A.koszul
    doc.tables["koszul_homology"] = KH.rows()
    doc.tables["h1_squared"] = [{"i": 2, "t": t, "dim": n} for t, n in sorted(KH.product_image_dims.items())]
    doc.tables["wedge2_conormal"] = A.wedge_conormal.rows()
    doc.tables["wedge2_h1"] = A.wedge_h1.rows()
    doc.tables["t3_koszul"] = [{"i": 3, "t": t, "dim": n} for t, n in sorted(t3_via_koszul(KH).items())]
    doc.reports["koszul"] = {"h1_generator_degrees": KH.generator_degrees(1), "h2_generator_degrees": KH.generator_degrees(2)}
    if A.d >= 4:
        doc.reports["wedge_tor"] = A.wedge_tor().to_json()
    if A.d >= 5:
        doc.reports["koszul_sequence"] = A.tkos_check().to_json()
    else:
        doc.incomplete.append("the Koszul exact-sequence check needs T_4, i.e. hom bound >= 5")


def cmd_tate(A: Analysis, doc: Document):
    X = A.resolvent if doc.args.module == "S" else A.residue_resolvent
    doc.tables["variables"] = [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(X.variable_degrees().items())]
    table = X.acyclicity_table(A.jobs)
    doc.tables["acyclicity"] = [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(table.items())]
    rep = X.summary()
    rep["acyclic"] = not any(table.values())
    doc.reports["resolvent"] = rep
    if not rep["acyclic"]:
        doc.incomplete.append("resolvent not acyclic inside the bounds")


def cmd_cotangent(A: Analysis, doc: Document):
    T = A.cotangent_S if doc.args.module == "S" else A.cotangent_K
    doc.tables["cotangent"] = T.rows()
    doc.tables["L_generators"] = [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(A.resolvent.variable_degrees().items())]
    doc.tables["conormal"] = [{"i": 0, "t": t, "dim": n} for t, n in sorted(A.L.conormal.items())]
    doc.reports["cotangent"] = {
        "module": T.module,
        "route": T.route,
        "ranks_L": A.L.ranks(),
        "witnesses": {str(i): T.witness(i) for i in range(2, T.truncation[0] + 1)},
        "upper_bound_rows": T.upper_bound_rows,
    }
    if doc.args.module == "S":
        doc.reports["cross_checks"] = A.cross_checks()
    if T.upper_bound_rows:
        doc.incomplete.append(f"rows {T.upper_bound_rows} are upper bounds only")


def cmd_deviations(A: Analysis, doc: Document):
    counts = A.deviations_counts
    series = A.deviations_series
    doc.reports["deviations"] = {
        "resolvent_counts": counts.to_json(),
        "series_extraction": {"bound": A.N, "eps": {str(i): series[i] for i in range(1, A.N + 1)}, "notes": series.notes},
        "agree": all(counts[i] == series[i] for i in range(1, counts.bound + 1)),
    }


def cmd_poincare(A: Analysis, doc: Document):
    P = poincare_from_deviations(A.deviations_series, A.N)
    betti = A.betti_K
    doc.tables["betti_K"] = A.resolution_K[1].rows()
    doc.tables["poincare_K"] = _series_rows(P.coeffs)
    doc.reports["poincare"] = {
        "direct_betti": betti,
        "agree": all(P[i] == b for i, b in betti.items()),
        "deviation_source": A.deviations_series.notes,
    }


def cmd_alpha(A: Analysis, doc: Document):
    doc.reports["alpha"] = A.alpha.to_json()


def cmd_mahler(A: Optional[Analysis], doc: Document):
    if doc.args.input:
        with open(doc.args.input, encoding="utf-8") as fh:
            text = fh.read()
        seq = parse_sequence(text)
        doc.reports["input"] = {"file": doc.args.input, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(), "length": len(seq)}
        doc.reports["mahler"] = mahler_zero_pattern(seq, doc.args.r_max).to_json()
    else:
        doc.reports["mahler"] = A.mahler(MAHLER_LENGTH, doc.args.r_max).to_json()


def cmd_ci_check(A: Analysis, doc: Document):
    rep = classify(A)
    doc.reports["ci"] = rep.to_json()
    if rep.perfect is None:
        doc.incomplete.append("perfection undetermined inside the bounds")


def cmd_report(A: Analysis, doc: Document):
    for fn in (cmd_invariants, cmd_resolve, cmd_koszul, cmd_tate, cmd_cotangent, cmd_deviations, cmd_poincare, cmd_alpha, cmd_mahler, cmd_ci_check):
        fn(A, doc)


HANDLERS = {
    "invariants": cmd_invariants,
    "resolve": cmd_resolve,
    "koszul": cmd_koszul,
    "tate": cmd_tate,
    "cotangent": cmd_cotangent,
    "deviations": cmd_deviations,
    "poincare": cmd_poincare,
    "alpha": cmd_alpha,
    "mahler": cmd_mahler,
    "ci-check": cmd_ci_check,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cotangent-kit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cotangent-kit {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="ideal file (not needed for 'mahler --input')")
    p.add_argument("--hom-bound", type=int, default=5, metavar="d")
    p.add_argument("--deg-bound", type=int, default=10, metavar="D")
    p.add_argument("--series-order", type=int, default=32, metavar="N")
    p.add_argument("--module", choices=("S", "K"), default="S")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--input", metavar="SEQ", help="sequence file for 'mahler' (rationals separated by whitespace or commas)")
    p.add_argument("--r-max", type=int, default=MAHLER_R_MAX)
    return p


def run_command(args) -> int:
    source = None
    A = None
    if args.command == "mahler" and args.input:
        if args.file:
            raise IdealFileError("give either an ideal file or --input, not both", 1, 1)
    else:
        if not args.file:
            raise IdealFileError(f"'{args.command}' needs an ideal file", 1, 1)
        source = parse_ideal_file(args.file)
        A = Analysis(source.ideal, args.hom_bound, args.deg_bound, args.series_order, args.jobs, source.flags)
    doc = Document(args.command, args, source)
    status = EXIT_OK
    try:
        HANDLERS[args.command](A, doc)
    except (BoundExhaustedError, TruncationError) as exc:
        doc.incomplete.append(str(exc))
    if doc.incomplete:
        status = EXIT_TRUNCATED
    data = doc.to_json()
    text = to_json_text(data) if args.format == "json" else to_markdown(data)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.hom_bound < 1 or args.deg_bound < 0 or args.series_order < 1 or args.jobs < 1 or args.r_max < 1:
        print("error: bounds, --jobs and --r-max must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return run_command(args)
    except (IdealFileError, NotProperIdealError, SeriesError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
