"""Command-line interface.

Every run that writes files also writes a JSON manifest recording the full
parameter set, seed, and output list; `scattermet replay manifest.json`
re-executes the recorded command and reproduces the outputs byte for byte.

Exit codes: 0 success, 2 usage or domain error, 3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, fock, networks, qfi, verify
from .decompose import (
    circuit_listing,
    decompose_orthogonal,
    elements_to_json,
    reconstruction_error,
    reflectivity_report,
    rotation_count,
)
from .errors import ScattermetError, TooLarge
from .occupations import OccupationVector, parse_occupation
from .walkers import (
    WalkerConfig,
    first_region_edge,
    run_ensemble,
)

MANIFEST_SCHEMA = 1

TABLE_SCHEMA = "scattermet.qfi_table.v1"
KADV_SCHEMA = "scattermet.kadv_scaling.v1"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(outdir: Path, subcommand: str, argv: list[str], params: dict,
                    outputs: list[Path], extra: dict | None = None,
                    started: float | None = None) -> Path:
    manifest = {
        "schema_version": MANIFEST_SCHEMA,
        "tool": "scattermet",
        "version": __version__,
        "subcommand": subcommand,
        "argv": argv,
        "params": params,
        "outputs": [str(p.name) for p in outputs],
        "sha256": {str(p.name): _sha256(p) for p in outputs},
        "duration_s": None if started is None else round(time.monotonic() - started, 3),
    }
    if extra:
        manifest.update(extra)
    path = outdir / "manifest.json"
    _write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _single_photon_inputs(m: int, n: int):
    for positions in itertools.combinations(range(m), n):
        yield OccupationVector(m, {p: 1 for p in positions})


def _occ_label(occ: OccupationVector) -> str:
    if occ.modes <= 64:
        return "".join(str(occ.count(i)) for i in range(occ.modes))
    return ",".join(f"{i + 1}:{c}" for i, c in occ.items())


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_table(args, argv) -> int:
    m, n = args.m, args.photons
    if args.input is not None:
        columns = [parse_occupation(args.input, m)]
    else:
        columns = list(_single_photon_inputs(m, n))
    rows = {
        "Separable": qfi.qfi_separable,
        "Uniform": qfi.qfi_uniform,
        "Symmetric": qfi.qfi_symmetric,
    }
    averages = {
        "Separable": qfi.average_qfi_exact("sep", columns[0]),
        "Uniform": qfi.average_qfi_exact("uni", columns[0]),
        "Symmetric": qfi.qfi_symmetric(columns[0]),
    }
    labels = [_occ_label(occ) for occ in columns]
    cells = {name: [f"{func(occ):.9g}" for occ in columns] for name, func in rows.items()}
    width = 2 + max(len(text) for texts in cells.values() for text in texts + labels)
    print("Input".ljust(11) + "".join(lab.rjust(width) for lab in labels)
          + "Avg.".rjust(width))
    csv_lines = [f"# schema={TABLE_SCHEMA}", "family," + ",".join(labels) + ",avg"]
    for name, func in rows.items():
        print(name.ljust(11) + "".join(text.rjust(width) for text in cells[name])
              + f"{averages[name]:.9g}".rjust(width))
        csv_lines.append(name.lower() + ","
                         + ",".join(f"{func(occ):.17g}" for occ in columns)
                         + f",{averages[name]:.17g}")
    if args.out:
        started = time.monotonic()
        out = Path(args.out)
        _write_text(out, "\n".join(csv_lines) + "\n")
        _write_manifest(out.parent, "table", argv,
                        {"m": m, "photons": n, "input": args.input},
                        [out], started=started)
    return 0


def cmd_qfi(args, argv) -> int:
    occ = parse_occupation(args.occupation, args.m)
    kind = networks.parse_kind(args.kind)
    closed = qfi.family_qfi(kind, occ)
    print(f"closed-form QFI: {closed:.9g}")
    if args.oracle:
        oracle = fock.qfi_oracle(networks.generator(kind, args.m), occ)
        print(f"fock-space QFI:  {oracle.full:.9g}")
        print(f"difference:      {abs(closed - oracle.full):.3e}")
    return 0


def cmd_walk(args, argv) -> int:
    started = time.monotonic()
    config = WalkerConfig(
        modes=args.m,
        pair=args.pair,
        chi=args.chi,
        n_avg=args.navg,
        walkers=args.walkers,
        samples_per_walker=args.kmax,
        master_seed=args.seed,
        postselect_single=args.postselect_single,
        keep_traces=args.traces,
    )
    summary = run_ensemble(config)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs = []

    summary_path = outdir / "summary.csv"
    _write_text(summary_path, summary.summary_csv())
    outputs.append(summary_path)

    hist_path = outdir / "photon_hist.csv"
    _write_text(hist_path, summary.photon_stats.to_csv(config.modes, config.resolved_chi))
    outputs.append(hist_path)

    if args.traces:
        traces_path = outdir / "traces.csv"
        _write_text(traces_path, summary.traces_csv())
        outputs.append(traces_path)

    n_round = round(config.resolved_n_avg)
    extra = {
        "m": config.modes,
        "chi": config.resolved_chi,
        "n_avg": config.resolved_n_avg,
        "pair": config.pair,
        "analytic_kadv": summary.analytic_kadv,
        "empirical_kadv": summary.empirical_kadv,
        "region_edge": first_region_edge(config.modes, n_round) if n_round >= 2 else None,
        "acceptance_rate": summary.acceptance_rate,
        "mean_photons_observed": summary.photon_stats.mean_n,
        "csv_schemas": {
            "summary.csv": summary.SCHEMA_SUMMARY,
            "photon_hist.csv": summary.photon_stats.SCHEMA,
        },
    }
    _write_manifest(outdir, "walk", argv, {
        "m": args.m, "pair": args.pair, "chi": args.chi, "navg": args.navg,
        "walkers": args.walkers, "kmax": args.kmax, "seed": args.seed,
        "postselect_single": args.postselect_single, "traces": args.traces,
    }, outputs, extra=extra, started=started)

    print(f"wrote {', '.join(str(p) for p in outputs)}")
    if summary.analytic_kadv is not None:
        print(f"analytic k_adv:  {summary.analytic_kadv:.9g}")
    if summary.empirical_kadv is not None:
        print(f"empirical k_adv: {summary.empirical_kadv:.9g}")
    if extra["region_edge"] is not None:
        print(f"first region:    k in [1, {extra['region_edge']}]")
    if summary.acceptance_rate is not None:
        print(f"acceptance rate: {summary.acceptance_rate:.4f}")
    print(f"mean photons per sample: {summary.photon_stats.mean_n:.4f}")
    return 0


def cmd_measure(args, argv) -> int:
    started = time.monotonic()
    occ = parse_occupation(args.occupation, args.m)
    start, stop, num = args.phi_grid
    phis = np.linspace(start, stop, int(num))
    curve = fock.measurement_curve(args.family, occ, phis)
    fam = fock.family_of(args.family, args.m)
    limit = fock.phi_zero_limit_fisher(fam, occ)
    print(f"phi->0 extrapolated Fisher information: {limit:.9g}")
    if occ.is_single_photon():
        n = occ.total
        want = n + n * (n - 1) / (occ.modes - 1)
        print(f"single-photon closed form n + n(n-1)/(m-1): {want:.9g}")
        print(f"difference: {abs(limit - want):.3e}")
    else:
        print(f"closed-form QFI: {curve.qfi:.9g}")
    if args.out:
        out = Path(args.out)
        _write_text(out, curve.to_csv())
        _write_manifest(out.parent, "measure", argv, {
            "m": args.m, "occupation": args.occupation, "family": args.family,
            "phi_grid": list(args.phi_grid),
        }, [out], extra={"csv_schemas": {out.name: curve.SCHEMA}}, started=started)
        print(f"wrote {out}")
    return 0


def cmd_decompose(args, argv) -> int:
    started = time.monotonic()
    if args.matrix:
        M = networks.matrix_from_json(Path(args.matrix).read_text(encoding="utf-8"))
        if np.iscomplexobj(M):
            raise ScattermetError("decomposition handles real orthogonal matrices only")
        target = np.asarray(M, dtype=float)
    else:
        if args.m is None:
            raise ScattermetError("give a mode count or --matrix FILE")
        target = networks.symmetrizer(args.m)
    elements = decompose_orthogonal(target)
    err = reconstruction_error(elements, target)
    etas = reflectivity_report(elements)
    print(circuit_listing(elements))
    print(f"rotations: {rotation_count(elements)}  (budget {target.shape[0] * (target.shape[0] - 1) // 2})")
    print(f"reconstruction error: {err:.3e}")
    print(f"eta report: {etas}")
    if args.out:
        out = Path(args.out)
        payload = {
            "modes": int(target.shape[0]),
            "elements": json.loads(elements_to_json(elements)),
            "reconstruction_error": err,
            "rotation_count": rotation_count(elements),
            "eta_report": etas,
        }
        _write_text(out, json.dumps(payload, indent=2) + "\n")
        _write_manifest(out.parent, "decompose", argv,
                        {"m": args.m, "matrix": args.matrix}, [out], started=started)
        print(f"wrote {out}")
    return 0


def cmd_verify(args, argv) -> int:
    try:
        results = verify.run_suite(args.suite)
    except KeyError as exc:
        print(exc, file=sys.stderr)
        return 2
    for res in results:
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
    report = {
        "suite": args.suite,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    if args.json:
        _write_text(Path(args.json), json.dumps(report, indent=2) + "\n")
    return 0 if report["passed"] else 1


def cmd_kadv(args, argv) -> int:
    started = time.monotonic()
    lo, hi = args.modes_exp
    lines = [f"# schema={KADV_SCHEMA}", "m,n_avg,kadv"]
    for exp in range(int(lo), int(hi) + 1):
        m = 2**exp
        for n_avg in args.navg:
            if n_avg > m // 2:
                continue
            lines.append(f"{m},{n_avg},{qfi.kadv(m, n_avg):.17g}")
    out = Path(args.out)
    _write_text(out, "\n".join(lines) + "\n")
    _write_manifest(out.parent, "kadv", argv,
                    {"navg": args.navg, "modes_exp": list(args.modes_exp)},
                    [out], extra={"csv_schemas": {out.name: KADV_SCHEMA}},
                    started=started)
    print(f"wrote {out}")
    return 0


def cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    recorded = manifest.get("argv")
    if not recorded:
        raise ScattermetError("manifest records no argv to replay")
    print(f"replaying: scattermet {' '.join(recorded)}")
    return main(recorded)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _phi_grid(text: str) -> tuple[float, float, int]:
    try:
        start, stop, num = text.split(":")
        return float(start), float(stop), int(num)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected START:STOP:NUM, got {text!r}") from None


def _mode_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scattermet",
        description="Multimode scattershot metrology: networks, Fisher information, "
                    "Monte Carlo walker ensembles.",
    )
    parser.add_argument("--version", action="version", version=f"scattermet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="QFI of every single-photon input, all families")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--photons", type=int, default=2)
    p.add_argument("--input", help="restrict to one occupation string")
    p.add_argument("--out", help="also write a CSV artifact")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("qfi", help="closed-form QFI of one input, optional oracle check")
    p.add_argument("kind", choices=["mzi", "sep", "uni", "sym"])
    p.add_argument("m", type=int)
    p.add_argument("occupation")
    p.add_argument("--oracle", action="store_true",
                   help="also compute the Fock-space value")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("walk", help="Monte Carlo walker ensemble")
    p.add_argument("--m", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--navg", type=float, help="target mean photons per sample")
    group.add_argument("--chi", type=float, help="squeezing strength directly")
    p.add_argument("--pair", choices=["sep_vs_sym", "uni_vs_sym"], default="sep_vs_sym")
    p.add_argument("--walkers", type=int, default=2000)
    p.add_argument("--kmax", type=int, default=250)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--postselect-single", action="store_true")
    p.add_argument("--traces", action="store_true", help="also write per-walker traces")
    p.add_argument("--outdir", default="walk_out")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("measure", help="input=output measurement curve over phi")
    p.add_argument("m", type=int)
    p.add_argument("occupation")
    p.add_argument("--family", choices=["sym", "sep", "mzi"], default="sym")
    p.add_argument("--phi-grid", type=_phi_grid, default=(0.05, 1.5, 30),
                   help="START:STOP:NUM (default 0.05:1.5:30)")
    p.add_argument("--out", help="write the curve CSV")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("decompose", help="decompose an orthogonal network into elements")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--matrix", help="JSON matrix file instead of the built-in symmetriser")
    p.add_argument("--out", help="write the element-list JSON")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=["netbuild", "qfi", "fock", "scattershot", "all"])
    p.add_argument("--json", help="write a machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kadv", help="crossover sample size over a mode-count sweep")
    p.add_argument("--navg", type=int, nargs="+", default=[30, 40])
    p.add_argument("--modes-exp", type=_mode_range, default=(10, 18),
                   help="LO:HI exponents; sweeps m = 2^LO .. 2^HI")
    p.add_argument("--out", default="kadv_scaling.csv")
    p.set_defaults(func=cmd_kadv)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, list(argv))
    except TooLarge as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except ScattermetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
