"""Command line front end: run analyses on generator files, emit reports.

Usage::

    repdyn dominate   --input gens.json --k 1 --max-length 8 --out-dir out/
    repdyn spectrum   --input gens.json --k 1 --m-max 6
    repdyn split      --input gens.json --k 1 --window 48
    repdyn affine     --input gens.json --max-length 6
    repdyn flowmetric --input geodesics.json --window 40

Every command writes one JSON summary plus zero or more CSV detail tables
into ``--out-dir``.  CSVs use '.' decimals, LF endings, a header row, and 17
significant digits, so identical configurations reproduce identical bytes;
the JSON summary is deterministic except for its ``timestamp`` field.

Exit codes: 0 pass, 2 refuted or failed, 3 inconclusive, 64 bad usage or
unparseable input (with line/column where available), 70 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, affine, domination, flowbundle, spectrum, words
from .errors import (
    DegenerateGapError,
    DegenerateInputError,
    EnumerationSizeError,
    RepdynError,
    WindowBoundsError,
)
from .linalg import subspace_distance

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_NUMERIC = 70

DEFAULT_SAMPLES = 200
DEFAULT_SEED = 0


class InputFileError(Exception):
    """Input could not be parsed or validated; message includes location."""


# ---------------------------------------------------------------------------
# input parsing


def _reject_constant(name):
    raise InputFileError(f"non-finite JSON constant {name!r} is not accepted")


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise InputFileError(
            f"{path}: parse error at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(doc, dict):
        raise InputFileError(f"{path}: top level must be a JSON object")
    return doc


def _number(value, where) -> float:
    """A JSON number or an exact rational string like "3/4", as float."""
    if isinstance(value, bool):
        raise InputFileError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(Fraction(value))
        except (ValueError, ZeroDivisionError) as e:
            raise InputFileError(f"{where}: not a number or p/q rational: {value!r}") from e
    else:
        raise InputFileError(f"{where}: expected a number, got {type(value).__name__}")
    if not np.isfinite(out):
        raise InputFileError(f"{where}: value {value!r} is not finite")
    return out


def _matrix(rows, n, where):
    if not isinstance(rows, list) or len(rows) != n:
        raise InputFileError(f"{where}: expected {n} rows")
    out = np.empty((n, n))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputFileError(f"{where}[{i}]: expected {n} entries")
        for j, v in enumerate(row):
            out[i, j] = _number(v, f"{where}[{i}][{j}]")
    return out


def parse_generator_doc(doc, path=""):
    """Validate a generator document into names, matrices, translations.

    The document is ``{"n": int, "generators": [{"name": str, "rows":
    [[...]]}], "translations": [[...], ...]}`` with translations optional;
    entries are numbers or "p/q" strings.  Extra keys (``lines`` for the
    split command) pass through untouched.
    """
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputFileError(f"{path}: \"n\" must be an integer")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputFileError(f"{path}: \"generators\" must be a nonempty array")
    names, matrices = [], []
    for idx, entry in enumerate(gens):
        where = f"{path}: generators[{idx}]"
        if not isinstance(entry, dict):
            raise InputFileError(f"{where}: expected an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise InputFileError(f"{where}.name: expected a nonempty string")
        names.append(name)
        matrices.append(_matrix(entry.get("rows"), n, f"{where}.rows"))
    translations = None
    if "translations" in doc:
        tr = doc["translations"]
        if not isinstance(tr, list) or len(tr) != len(gens):
            raise InputFileError(
                f"{path}: \"translations\" must list one vector per generator"
            )
        translations = []
        for idx, vec in enumerate(tr):
            where = f"{path}: translations[{idx}]"
            if not isinstance(vec, list) or len(vec) != n:
                raise InputFileError(f"{where}: expected {n} entries")
            translations.append(
                np.array([_number(v, f"{where}[{j}]") for j, v in enumerate(vec)])
            )
    return names, matrices, translations


def load_generator_set(args):
    doc = load_json(args.input)
    names, matrices, _ = parse_generator_doc(doc, args.input)
    try:
        return domination.GeneratorSet(matrices, names), doc
    except DegenerateInputError as e:
        raise InputFileError(f"{args.input}: {e}") from e


def load_affine_set(args):
    doc = load_json(args.input)
    names, matrices, translations = parse_generator_doc(doc, args.input)
    n = matrices[0].shape[0]
    if translations is None:
        translations = [np.zeros(n) for _ in matrices]
    try:
        maps = [affine.AffineMap(m, t) for m, t in zip(matrices, translations)]
        return affine.AffineGeneratorSet(maps, names), doc
    except DegenerateInputError as e:
        raise InputFileError(f"{args.input}: {e}") from e


def _letters(seq, where):
    if not isinstance(seq, list) or not seq:
        raise InputFileError(f"{where}: expected a nonempty array of letters")
    out = []
    for j, v in enumerate(seq):
        if not isinstance(v, int) or isinstance(v, bool) or v == 0:
            raise InputFileError(f"{where}[{j}]: letters are nonzero integers")
        out.append(v)
    return out


def parse_lines(doc, gens, window, path=""):
    """Flow lines for the split command.

    The optional top-level key ``"lines"`` is an array of objects, each
    either ``{"pattern": [letters]}`` (periodic line) or ``{"letters":
    [2*window letters], "offset": int}``.  Without it, one periodic line per
    generator is analyzed.
    """
    specs = doc.get("lines")
    if specs is None:
        return [
            (gens.names[i], words.FlowLineWindow.periodic([i + 1], window))
            for i in range(gens.rank)
        ]
    if not isinstance(specs, list) or not specs:
        raise InputFileError(f"{path}: \"lines\" must be a nonempty array")
    out = []
    for idx, spec in enumerate(specs):
        where = f"{path}: lines[{idx}]"
        if not isinstance(spec, dict):
            raise InputFileError(f"{where}: expected an object")
        if "pattern" in spec:
            letters = _letters(spec["pattern"], f"{where}.pattern")
        elif "letters" in spec:
            letters = _letters(spec["letters"], f"{where}.letters")
        else:
            raise InputFileError(f"{where}: need \"pattern\" or \"letters\"")
        for l in letters:
            if abs(l) > gens.rank:
                raise InputFileError(f"{where}: letter {l} outside rank {gens.rank}")
        try:
            if "pattern" in spec:
                line = words.FlowLineWindow.periodic(letters, window)
                label = "periodic:" + ".".join(str(l) for l in letters)
            else:
                offset = spec.get("offset", 0)
                if not isinstance(offset, int) or isinstance(offset, bool):
                    raise InputFileError(f"{where}.offset: expected an integer")
                line = words.FlowLineWindow(letters, len(letters) // 2, offset)
                label = f"explicit:{idx}"
        except (ValueError, WindowBoundsError) as e:
            raise InputFileError(f"{where}: {e}") from e
        out.append((label, line))
    return out


def parse_geodesics(doc, path=""):
    """Geodesic list for the flowmetric command.

    Expects ``{"rank": int, "geodesics": [{"anchor": [letters], "forward":
    [letters], "backward": [letters]}, ...]}``; anchors may be empty arrays.
    """
    rank = doc.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise InputFileError(f"{path}: \"rank\" must be a positive integer")
    specs = doc.get("geodesics")
    if not isinstance(specs, list) or len(specs) < 1:
        raise InputFileError(f"{path}: \"geodesics\" must be a nonempty array")
    out = []
    for idx, spec in enumerate(specs):
        where = f"{path}: geodesics[{idx}]"
        if not isinstance(spec, dict):
            raise InputFileError(f"{where}: expected an object")
        anchor = spec.get("anchor", [])
        if anchor == []:
            anchor_letters = []
        else:
            anchor_letters = _letters(anchor, f"{where}.anchor")
        fwd = _letters(spec.get("forward"), f"{where}.forward")
        back = _letters(spec.get("backward"), f"{where}.backward")
        for l in anchor_letters + fwd + back:
            if abs(l) > rank:
                raise InputFileError(f"{where}: letter {l} outside rank {rank}")
        try:
            geo = words.TreeGeodesic.from_rays(anchor_letters, fwd, back)
        except ValueError as e:
            raise InputFileError(f"{where}: {e}") from e
        out.append(geo)
    return out


# ---------------------------------------------------------------------------
# output


def format_number(x) -> str:
    return f"{float(x):.17g}"


def write_csv(path, header, rows):
    """Write a CSV with LF endings and 17-significant-digit floats."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            out = []
            for cell in row:
                if isinstance(cell, bool):
                    out.append(str(cell).lower())
                elif isinstance(cell, (int, np.integer)):
                    out.append(str(int(cell)))
                elif isinstance(cell, (float, np.floating)):
                    out.append(format_number(cell))
                else:
                    out.append(str(cell))
            writer.writerow(out)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, words.Word):
        return list(value.letters)
    return value


def _word_entry(gens, word):
    if word is None:
        return None
    return {"name": gens.word_name(word), "letters": list(word.letters)}


def write_summary(out_dir, command, config, results, csv_files):
    """Write the JSON summary, then re-read and revalidate it."""
    report = {
        "command": command,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": _jsonable(config),
        "results": _jsonable(results),
        "csv_files": [os.path.basename(p) for p in csv_files],
    }
    path = os.path.join(out_dir, f"{command}_summary.json")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(path, "r", encoding="utf-8") as fh:
        reread = json.load(fh)
    problems = validate_report(reread)
    if problems:
        raise RuntimeError(f"emitted report failed validation: {problems}")
    return path


_REQUIRED_RESULT_KEYS = {
    "dominate": (
        "verdict", "k", "n", "L_max", "L_used", "truncated", "A_hat", "C_hat",
        "A_lower", "C_lower", "refuted_at", "violating_word", "spheres",
    ),
    "spectrum": (
        "m_max", "m_used", "truncated", "hull_affine_dim", "hausdorff",
        "containment", "involution",
    ),
    "split": ("window", "k", "lines", "any_degenerate"),
    "affine": ("hks", "eigenvalue_norm_one", "bounded_singular", "overall_pass"),
    "flowmetric": ("window", "count", "pairs"),
}


def validate_report(report) -> list[str]:
    """Schema check for an emitted JSON summary; returns found problems."""
    problems = []
    if not isinstance(report, dict):
        return ["report is not an object"]
    for key in ("command", "version", "timestamp", "config", "results", "csv_files"):
        if key not in report:
            problems.append(f"missing key {key}")
    command = report.get("command")
    required = _REQUIRED_RESULT_KEYS.get(command)
    if required is None:
        problems.append(f"unknown command {command!r}")
        return problems
    results = report.get("results")
    if not isinstance(results, dict):
        problems.append("results is not an object")
        return problems
    for key in required:
        if key not in results:
            problems.append(f"results missing key {key}")
    config = report.get("config")
    if not isinstance(config, dict):
        problems.append("config is not an object")
    elif "seed" not in config:
        problems.append("config missing seed")
    return problems


# ---------------------------------------------------------------------------
# commands


def _policy(args):
    if args.policy == "sampled":
        return words.Sampled(count=args.samples, seed=args.seed)
    return words.Exhaustive()


def _config(args, **extra):
    base = {
        "input": args.input,
        "policy": args.policy,
        "samples": args.samples if args.policy == "sampled" else None,
        "seed": args.seed,
        "threads": args.threads,
    }
    base.update(extra)
    return base


def cmd_dominate(args) -> int:
    gens, _ = load_generator_set(args)
    rep = domination.domination_scan(
        gens, k=args.k, L_max=args.max_length, policy=_policy(args),
        threads=args.threads,
    )
    csv_path = os.path.join(args.out_dir, "dominate_spheres.csv")
    write_csv(
        csv_path,
        ["L", "gap_min", "logak_min", "lognk1_max", "gap_mean", "count", "argmin_word"],
        [
            (r.length, r.gap_min, r.logak_min, r.lognk1_max, r.gap_mean, r.count,
             gens.word_name(r.argmin))
            for r in rep.spheres
        ],
    )
    results = {
        "verdict": rep.verdict,
        "k": rep.k,
        "n": rep.n,
        "L_max": rep.L_max,
        "L_used": rep.L_used,
        "truncated": rep.truncated,
        "A_hat": rep.A_hat,
        "C_hat": rep.C_hat,
        "A_ci": rep.A_ci,
        "A_lower": rep.A_lower,
        "C_lower": rep.C_lower,
        "top_slope": rep.top_slope,
        "bottom_slope": rep.bottom_slope,
        "L0": rep.L0,
        "refuted_at": rep.refuted_at,
        "violating_word": _word_entry(gens, rep.violating_word),
        "gap_tol": rep.gap_tol,
        "spheres": [
            {
                "L": r.length,
                "count": r.count,
                "gap_min": r.gap_min,
                "gap_mean": r.gap_mean,
                "logak_min": r.logak_min,
                "lognk1_max": r.lognk1_max,
                "argmin_word": _word_entry(gens, r.argmin),
            }
            for r in rep.spheres
        ],
    }
    write_summary(
        args.out_dir, "dominate",
        _config(args, k=args.k, max_length=args.max_length),
        results, [csv_path],
    )
    if rep.verdict in ("dominated", "partially-hyperbolic"):
        return EXIT_OK
    if rep.verdict == "refuted":
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


def cmd_spectrum(args) -> int:
    gens, _ = load_generator_set(args)
    cone = spectrum.sample_cone(
        gens, m_max=args.m_max, policy=_policy(args), threads=args.threads
    )
    contain = spectrum.containment_check(cone, k=args.k, tol=args.tol)
    invol = spectrum.involution_symmetry_check(cone)

    n = cone.n
    coord_names = [f"c{i + 1}" for i in range(n)]
    samples_path = os.path.join(args.out_dir, "spectrum_cone_samples.csv")
    write_csv(
        samples_path,
        ["m"] + coord_names + ["zero_indices", "word"],
        [
            (s.length, *s.jordan,
             ";".join(str(i) for i in s.zero_indices), gens.word_name(s.word))
            for s in cone.iter_samples()
        ],
    )
    hull_path = os.path.join(args.out_dir, "spectrum_hull.csv")
    write_csv(hull_path, coord_names, [tuple(v) for v in cone.hull_vertices])

    results = {
        "m_max": cone.m_max,
        "m_used": cone.m_used,
        "truncated": cone.truncated,
        "hull_affine_dim": cone.hull_affine_dim,
        "hull_vertex_count": int(cone.hull_vertices.shape[0]),
        "hausdorff": cone.hausdorff,
        "containment": {
            "passed": contain.passed,
            "reason": contain.reason,
            "k": contain.k,
            "window": list(contain.window),
            "C_hat": contain.C_hat,
            "n_samples": contain.n_samples,
            "n_zero": contain.n_zero,
            "n_empty": contain.n_empty,
            "violations": [
                {"m": m, "word": _word_entry(gens, w), "zero_indices": list(idx)}
                for m, w, idx in contain.violations[:50]
            ],
        },
        "involution": {
            "passed": invol.passed,
            "max_deviation": invol.max_deviation,
            "tol": invol.tol,
            "mismatch_count": len(invol.mismatches),
        },
    }
    write_summary(
        args.out_dir, "spectrum",
        _config(args, k=args.k, m_max=args.m_max, tol=args.tol),
        results, [samples_path, hull_path],
    )
    return EXIT_OK if (contain.passed and invol.passed) else EXIT_FAIL


def cmd_split(args) -> int:
    gens, doc = load_generator_set(args)
    lines = parse_lines(doc, gens, args.window, args.input)
    line_results = []
    csv_files = []
    any_degenerate = False
    for j, (label, line) in enumerate(lines):
        traj = flowbundle.build_trajectory(gens, line)
        entry = {"label": label, "index": j, "status": "ok", "detail": "",
                 "truncated": traj.truncated}
        try:
            split = flowbundle.estimate_splitting(traj, args.k)
            rates = flowbundle.measure_rates(traj, split)
        except (DegenerateGapError, DegenerateInputError) as e:
            any_degenerate = True
            entry.update(
                status="degenerate",
                detail=str(e),
                time=getattr(e, "time", None),
            )
            line_results.append(entry)
            continue
        entry.update(
            k=split.k,
            residual=split.residual,
            independence=split.independence,
            bases={
                "expanding": split.v_plus.basis,
                "neutral": split.v_zero.basis,
                "contracting": split.v_minus.basis,
            },
            rates={
                "a_plus": rates.a_plus,
                "A_plus": rates.A_plus,
                "a_minus": rates.a_minus,
                "A_minus": rates.A_minus,
                "aprime_plus_zero": rates.aprime_plus_zero,
                "Aprime_plus_zero": rates.Aprime_plus_zero,
                "aprime_zero_minus": rates.aprime_zero_minus,
                "Aprime_zero_minus": rates.Aprime_zero_minus,
            },
        )
        line_results.append(entry)

        tt = min(traj.t_forward, traj.t_backward)
        curve_cols = [
            "backward_expanding",
            "forward_contracting",
            "dominance_neutral_over_expanding",
            "dominance_contracting_over_neutral",
        ]
        t_max = max(tt, *(len(rates.curves[c]) - 1 for c in curve_cols))
        rows = []
        for t in range(t_max + 1):
            if 3 <= t <= tt:
                prev = flowbundle.splitting_at(traj, args.k, t - 1, t - 1)
                cur = flowbundle.splitting_at(traj, args.k, t, t)
                res_cell = max(
                    subspace_distance(cur[0], prev[0]),
                    subspace_distance(cur[1], prev[1]),
                    subspace_distance(cur[2], prev[2]),
                )
            else:
                res_cell = ""
            cells = [
                float(rates.curves[c][t]) if t < len(rates.curves[c]) else ""
                for c in curve_cols
            ]
            rows.append((t, res_cell, *cells))
        path = os.path.join(args.out_dir, f"split_line{j}.csv")
        write_csv(path, ["t", "residual", *curve_cols], rows)
        csv_files.append(path)

    results = {
        "window": args.window,
        "k": args.k,
        "any_degenerate": any_degenerate,
        "lines": line_results,
    }
    write_summary(
        args.out_dir, "split",
        _config(args, k=args.k, window=args.window),
        results, csv_files,
    )
    return EXIT_FAIL if any_degenerate else EXIT_OK


def cmd_affine(args) -> int:
    agens, _ = load_affine_set(args)
    policy = _policy(args)
    hks = affine.hks_test(agens, L_max=args.max_length, policy=policy,
                          threads=args.threads)
    eig = affine.eigenvalue_norm_one_check(
        agens, L_max=args.max_length, tol=args.tol, policy=policy,
        threads=args.threads,
    )
    bounded = affine.bounded_singular_check(
        agens, L_max=args.max_length, policy=policy, threads=args.threads
    )
    gens = agens.linear_part

    csv_path = os.path.join(args.out_dir, "affine_hks.csv")
    write_csv(
        csv_path,
        ["L", "max_normalized_det", "word"],
        [(r.length, r.value, gens.word_name(r.word)) for r in hks.spheres],
    )
    overall = hks.passed and (eig.passed or bounded.passed)
    results = {
        "overall_pass": overall,
        "hks": {
            "passed": hks.passed,
            "threshold": hks.threshold,
            "max_normalized": hks.max_normalized,
            "worst_word": _word_entry(gens, hks.worst_word),
            "worst_length": hks.worst_length,
            "first_fail_length": hks.first_fail_length,
            "truncated": hks.truncated,
        },
        "eigenvalue_norm_one": {
            "passed": eig.passed,
            "criterion": eig.criterion,
            "tol": eig.tol,
            "worst_deviation": eig.worst_deviation,
            "worst_word": _word_entry(gens, eig.worst_word),
            "worst_length": eig.worst_length,
            "truncated": eig.truncated,
        },
        "bounded_singular": {
            "passed": bounded.passed,
            "criterion": bounded.criterion,
            "C_hat": bounded.C_hat,
            "slope": bounded.slope,
            "slope_ci": bounded.slope_ci,
            "truncated": bounded.truncated,
        },
    }
    write_summary(
        args.out_dir, "affine",
        _config(args, max_length=args.max_length, tol=args.tol),
        results, [csv_path],
    )
    return EXIT_OK if overall else EXIT_FAIL


def cmd_flowmetric(args) -> int:
    doc = load_json(args.input)
    geos = parse_geodesics(doc, args.input)
    for j, g in enumerate(geos):
        if g.half_width < args.window:
            raise InputFileError(
                f"{args.input}: geodesics[{j}] covers half width {g.half_width},"
                f" below the requested window {args.window}"
            )
    pairs = []
    for i in range(len(geos)):
        for j in range(i, len(geos)):
            r = words.flow_metric(geos[i], geos[j], args.window)
            pairs.append(
                {"i": i, "j": j, "value": r.value, "tail_bound": r.tail_bound}
            )
    csv_path = os.path.join(args.out_dir, "flowmetric_pairs.csv")
    write_csv(
        csv_path,
        ["i", "j", "value", "tail_bound"],
        [(p["i"], p["j"], p["value"], p["tail_bound"]) for p in pairs],
    )
    results = {"window": args.window, "count": len(geos), "pairs": pairs}
    write_summary(
        args.out_dir, "flowmetric", _config(args, window=args.window),
        results, [csv_path],
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _default_threads() -> int:
    env = os.environ.get("REPDYN_THREADS", "")
    try:
        value = int(env)
        if value >= 1:
            return value
    except ValueError:
        pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repdyn",
        description="Numerical domination, spectrum, splitting, and affine"
        " analyses of finitely generated matrix groups.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="input JSON file")
    common.add_argument("--out-dir", default=".", help="directory for reports")
    common.add_argument(
        "--policy", choices=("exhaustive", "sampled"), default="exhaustive",
        help="scan whole word spheres or sample them",
    )
    common.add_argument(
        "--samples", type=int, default=DEFAULT_SAMPLES,
        help="words per sphere under the sampled policy",
    )
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for sampled scans")
    common.add_argument(
        "--threads", type=int, default=_default_threads(),
        help="worker threads (default: REPDYN_THREADS or all cores)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dominate", parents=[common],
                       help="k-domination and partial hyperbolicity scan")
    p.add_argument("--k", type=int, default=1, help="dominated index")
    p.add_argument("--max-length", type=int, default=8,
                   help="largest word sphere scanned")
    p.set_defaults(handler=cmd_dominate)

    p = sub.add_parser("spectrum", parents=[common],
                       help="joint spectrum cone and zero-index containment")
    p.add_argument("--k", type=int, default=1, help="containment index")
    p.add_argument("--m-max", type=int, default=6,
                   help="deepest normalized sample level")
    p.add_argument("--tol", type=float, default=None,
                   help="zero tolerance (default: scale aware per sample)")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("split", parents=[common],
                       help="cocycle splitting and rates along flow lines")
    p.add_argument("--k", type=int, default=1, help="splitting index")
    p.add_argument("--window", type=int, default=flowbundle.DEFAULT_WINDOW,
                   help="trajectory half width")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("affine", parents=[common],
                       help="eigenvalue-1 constraints for affine actions")
    p.add_argument("--max-length", type=int, default=6,
                   help="largest word sphere scanned")
    p.add_argument("--tol", type=float, default=affine.DEFAULT_EIGENVALUE_TOL,
                   help="unit-modulus eigenvalue tolerance")
    p.set_defaults(handler=cmd_affine)

    p = sub.add_parser("flowmetric", parents=[common],
                       help="weighted distances between tree geodesics")
    p.add_argument("--window", type=int, default=40,
                   help="truncation half width of the distance integral")
    p.set_defaults(handler=cmd_flowmetric)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        os.makedirs(args.out_dir, exist_ok=True)
        return args.handler(args)
    except InputFileError as e:
        print(f"repdyn: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (WindowBoundsError, EnumerationSizeError, DegenerateInputError) as e:
        print(f"repdyn: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"repdyn: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RepdynError, np.linalg.LinAlgError) as e:
        print(f"repdyn: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
