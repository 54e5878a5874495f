"""Command-line entry point: ``tflocal run | verify | info | presets``.

Exit codes: 0 success, 1 invariant violation or failed verification,
2 scenario/schema error, 3 not a frame, 4 eigensolver failure.
"""
import argparse
import contextlib
import datetime
import json
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import STUDY_EXPONENTS, eigen_decay_study, weighted_decay_study
from .gabor import NotAFrame, frame_info
from .quantize import localization_weyl_symbol, weyl_build
from .reports import decay_csv, norms_csv, spectrum_csv
from .scenarios import ScenarioError, build_scenario, list_presets, load_scenario
from .spectral import SolverError

log = logging.getLogger("tflocal")

EXIT_OK, EXIT_INVARIANT, EXIT_SCHEMA, EXIT_NOT_FRAME, EXIT_SOLVER = 0, 1, 2, 3, 4
WEIGHT_EXPONENTS = (1.0, 2.0)


class InvariantViolation(RuntimeError):
    pass


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _thread_limit():
    n = os.environ.get("TFLOCAL_THREADS")
    if not n:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        log.warning("TFLOCAL_THREADS set but threadpoolctl is unavailable; ignoring")
        return contextlib.nullcontext()
    return threadpool_limits(limits=int(n))


def _write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def analyse(built):
    """Run the scenario's analyses; returns ``(files, summary)`` with files as ``{name: text}``.

    Raises NotAFrame, SolverError or InvariantViolation.
    """
    spec = built.spec
    lat = built.lattice
    info = frame_info(built.phi1, lat)
    study = eigen_decay_study(
        built.operator, built.phi1, lat, top_k=spec.top_k, floor=spec.floor, seed=spec.seed
    )
    E, R = study.eigensystem, study.retained
    files = {}
    summary = {
        "frame_bounds": [info.lower_bound, info.upper_bound],
        "hermitian": built.operator.hermitian,
        "retained": len(R),
        "flags": study.flags,
        "baseline_seed": spec.seed,
        "baseline_exponent": study.baseline.fitted_exponent,
        "baseline_tail_64": study.baseline.relative_tail(64),
    }

    # hard invariants
    bad = np.flatnonzero(E.residuals > E.tolerance)
    if bad.size:
        raise InvariantViolation(f"eigen residual {E.residuals[bad[0]]:.3e} exceeds tolerance {E.tolerance:.3e}")
    if E.hermitian and np.max(np.abs(E.eigenvalues.imag), initial=0) > 1e-10:
        raise InvariantViolation("Hermitian operator produced non-real eigenvalues")
    for rep in [*study.reports, study.baseline]:
        if np.any(np.diff(rep.sigma_profile) > 1e-12 * max(rep.sigma_profile[0], 1e-300)):
            raise InvariantViolation(f"sigma profile of {rep.label} is not nonincreasing")

    if "spectrum" in spec.analysis:
        files["spectrum.csv"] = spectrum_csv(E)
    if "decay" in spec.analysis:
        for k, rep in enumerate(study.reports):
            files[f"decay_{k}.csv"] = decay_csv(rep)
        files["baseline.csv"] = decay_csv(study.baseline)
        summary["eigenfunctions"] = [
            {
                "index": k,
                "eigenvalue": [float(lam.real), float(lam.imag)],
                "exponent": rep.fitted_exponent,
                "tail_64": rep.relative_tail(64),
            }
            for k, (lam, rep) in enumerate(zip(R.eigenvalues, study.reports))
        ]
    if "norms" in spec.analysis or "weighted" in spec.analysis:
        rows = []
        if "norms" in spec.analysis:
            for norms in study.norms:
                rows.extend((n.p, n.q, 0.0, n.value) for n in norms)
        if "weighted" in spec.analysis:
            wrows = weighted_decay_study(
                built.operator, built.phi1, lat, WEIGHT_EXPONENTS, 1.0,
                top_k=spec.top_k, floor=spec.floor, seed=spec.seed,
            )
            rows.extend((1.0, 1.0, r.s, r.weighted) for r in wrows)
            summary["weighted"] = [
                {"index": r.index, "s": r.s, "ratio": r.ratio, "baseline_ratio": r.baseline_ratio, "relative": r.relative}
                for r in wrows
            ]
        files["norms.csv"] = norms_csv(rows)
        summary["norms_layout"] = (
            f"{len(STUDY_EXPONENTS)} unweighted rows (s=0) per retained eigenfunction in spectrum order, "
            f"then one weighted row per (s, eigenfunction) for s in {list(WEIGHT_EXPONENTS)}"
        )
    if "weyl" in spec.analysis:
        sigma = localization_weyl_symbol(built.symbol, built.phi1, built.phi2)
        mismatch = float(np.max(np.abs(weyl_build(sigma).matrix - built.operator.matrix)))
        summary["weyl_mismatch"] = mismatch
        if mismatch > 1e-9:
            raise InvariantViolation(f"localization/Weyl mismatch {mismatch:.3e} exceeds 1e-9")
    return files, summary


def cmd_run(ref, out_dir, seed=None):
    out = Path(out_dir)
    manifest = {"tool": "tflocal", "version": __version__, "started": _now(), "scenario": None, "outputs": []}

    def finish(status, error=None):
        manifest["status"] = status
        manifest["finished"] = _now()
        if error:
            manifest["error"] = error
            print(f"error: {error}", file=sys.stderr)
        try:
            out.mkdir(parents=True, exist_ok=True)
            _write_atomic(out / "manifest.json", json.dumps(manifest, indent=2, default=float) + "\n")
        except OSError as exc:
            print(f"error: cannot write manifest: {exc}", file=sys.stderr)
        return status

    try:
        spec = load_scenario(ref, seed)
        manifest["scenario"] = spec.to_dict()
        built = build_scenario(spec)
    except ScenarioError as exc:
        return finish(EXIT_SCHEMA, str(exc))
    try:
        with _thread_limit():
            files, summary = analyse(built)
    except NotAFrame as exc:
        return finish(EXIT_NOT_FRAME, str(exc))
    except SolverError as exc:
        return finish(EXIT_SOLVER, str(exc))
    except InvariantViolation as exc:
        return finish(EXIT_INVARIANT, f"invariant violated: {exc}")

    out.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(dir=out, prefix=".staging-"))
    try:
        for name, text in files.items():
            (staging / name).write_text(text, newline="")
        for name in files:
            os.replace(staging / name, out / name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    manifest["outputs"] = sorted(files, key=_output_key) + ["manifest.json"]
    manifest["summary"] = summary
    status = finish(EXIT_OK)
    print(f"{spec.name}: wrote {len(files)} files to {out} (retained {summary['retained']} eigenpairs)")
    return status


def _output_key(name):
    stem = name.split(".")[0]
    if stem.startswith("decay_"):
        return (1, int(stem[6:]))
    return (0 if name == "spectrum.csv" else 2, name)


def cmd_verify(level, seed=0):
    from .verify import run_suites

    with _thread_limit():
        results = run_suites(level, seed=seed or 0)
    first = None
    for r in results:
        state = "ok" if r.ok else "FAIL"
        line = f"{r.name:<22} {state:<4} {r.passed} checks passed ({r.seconds:.2f}s)"
        if not r.ok:
            line += f"  first failure: {r.failure}"
            first = first or (r.name, r.failure)
        print(line)
    npass = sum(r.ok for r in results)
    print(f"{npass}/{len(results)} suites passed")
    if first:
        print(f"first failing assertion: [{first[0]}] {first[1]}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_info(ref, seed=None):
    try:
        spec = load_scenario(ref, seed)
        built = build_scenario(spec)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(json.dumps(spec.to_dict(), indent=2))
    lat = spec.lattice
    print(f"lattice: alpha={lat.alpha} beta={lat.beta} L={lat.L} ({lat.size} atoms, redundancy {lat.redundancy:g})")
    op = built.operator
    print(f"operator: provenance={op.provenance} hermitian={op.hermitian} L={op.L}")
    try:
        info = frame_info(built.phi1, lat)
    except NotAFrame as exc:
        print(f"frame: not a frame ({exc})")
        return EXIT_NOT_FRAME
    print(f"frame bounds: A={info.lower_bound:.17g} B={info.upper_bound:.17g}")
    return EXIT_OK


def cmd_presets():
    for name, desc in list_presets().items():
        print(f"{name:<20} {desc}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="tflocal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario file or preset and write CSV reports")
    r.add_argument("scenario", help="scenario JSON file or preset name")
    r.add_argument("--out", required=True, help="output directory")

    v = sub.add_parser("verify", help="run the built-in invariant suites")
    v.add_argument("--level", choices=("fast", "full"), default="fast")

    i = sub.add_parser("info", help="print the resolved scenario and frame bounds")
    i.add_argument("scenario")

    sub.add_parser("presets", help="list registered presets")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "run":
        return cmd_run(args.scenario, args.out, args.seed)
    if args.command == "verify":
        return cmd_verify(args.level, args.seed)
    if args.command == "info":
        return cmd_info(args.scenario, args.seed)
    return cmd_presets()


if __name__ == "__main__":
    sys.exit(main())
