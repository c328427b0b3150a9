"""Command-line front end: parameter sweeps and quench experiments to CSV.

Each subcommand reads its parameters from defaults, then an optional
``key = value`` config file, then command-line flags (flags win). Every run
writes one CSV table plus a ``<out>.meta.json`` sidecar holding the resolved
configuration, the seed and the library version. Output bytes depend only on
the configuration and seed, never on thread count or wall clock.

Exit codes: 0 success, 2 invalid configuration or input files, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import DomainError, NumericError, QuenchKitError, ValidationError
from .files import (
    load_operator_file,
    parse_config_file,
    write_csv,
    write_metadata,
)
from .landau_zener import LZParams, lz_budget_analytic, lz_sweep
from .quench import QuenchSpec, entropy_budget
from .tpm import enumerate_paths, fluctuation_report, sample_trajectories
from .xy_chain import (
    XYParams,
    ising_finite_n,
    lambdas_finite_n,
    lambdas_small_beta,
    lambdas_thermodynamic,
    pair_budget_sum,
    riemann_error_bound,
    xy_sweep,
)

_EXPERIMENT_KEYS: dict[str, dict[str, str]] = {
    "lz-sweep": {
        "delta": "1.0",
        "b": "0.01",
        "dg": "0.001",
        "g0_start": "-0.5",
        "g0_stop": "1.5",
        "g0_points": "201",
        "betas": "0.1, 1, 5, 10",
    },
    "xy-field-sweep": {
        "gamma0": "1.0",
        "g0_start": "-2.0",
        "g0_stop": "2.0",
        "g0_points": "400",
        "betas": "0.1, 1, 3, 5",
        "n": "",
    },
    "xy-anisotropy-sweep": {
        "g0": "0.5",
        "gamma0_start": "-1.5",
        "gamma0_stop": "1.5",
        "gamma0_points": "400",
        "betas": "0.1, 1, 3, 5",
        "n": "",
    },
    "ising-finite-n": {
        "gamma0": "1.0",
        "n_values": "8, 16, 32, 64, 128, 256, 512",
        "g0_start": "-2.0",
        "g0_stop": "2.0",
        "g0_points": "81",
        "betas": "",
        "dg": "0.001",
    },
    "tpm-run": {
        "h0_file": "",
        "h1_file": "",
        "g0": "0.0",
        "dg": "0.0",
        "dh_file": "",
        "beta": "1.0",
        "samples": "0",
    },
    "generic-quench": {
        "h0_file": "",
        "h1_file": "",
        "g0": "0.0",
        "dg": "0.0",
        "dh_file": "",
        "betas": "1.0",
    },
}


def _as_float(cfg: dict[str, str], key: str) -> float:
    try:
        return float(cfg[key])
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: cannot parse {cfg[key]!r} as a number") from exc


def _as_int(cfg: dict[str, str], key: str) -> int:
    try:
        return int(cfg[key])
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: cannot parse {cfg[key]!r} as an integer") from exc


def _as_float_list(cfg: dict[str, str], key: str) -> list[float]:
    raw = cfg[key].strip()
    if not raw:
        return []
    try:
        return [float(tok) for tok in raw.split(",")]
    except ValueError as exc:
        raise ValidationError(f"config key {key!r}: cannot parse {cfg[key]!r} as a list") from exc


def _as_int_list(cfg: dict[str, str], key: str) -> list[int]:
    return [int(v) for v in _as_float_list(cfg, key)]


def _grid(cfg: dict[str, str], prefix: str) -> np.ndarray:
    start = _as_float(cfg, f"{prefix}_start")
    stop = _as_float(cfg, f"{prefix}_stop")
    points = _as_int(cfg, f"{prefix}_points")
    if points < 1:
        raise ValidationError(f"{prefix}_points must be >= 1, got {points}")
    return np.linspace(start, stop, points)


def _resolve_config(args: argparse.Namespace, kind: str) -> dict[str, str]:
    cfg = dict(_EXPERIMENT_KEYS[kind])
    if args.config:
        file_cfg = parse_config_file(args.config)
        declared = file_cfg.pop("kind", kind)
        if declared != kind:
            raise ValidationError(
                f"config file declares kind = {declared!r} but the {kind!r} subcommand was invoked"
            )
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ValidationError(f"unknown config keys for {kind}: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in cfg:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            cfg[key] = str(flag_value)
    return cfg


def _load_quench(cfg: dict[str, str]) -> QuenchSpec:
    if not cfg["h0_file"]:
        raise ValidationError("h0_file is required")
    h0 = load_operator_file(cfg["h0_file"])
    if cfg["dh_file"]:
        if cfg["h1_file"]:
            raise ValidationError("give either dh_file or h1_file, not both")
        return QuenchSpec.direct(h0, load_operator_file(cfg["dh_file"]))
    if not cfg["h1_file"]:
        raise ValidationError("either dh_file or h1_file (with g0, dg) is required")
    return QuenchSpec.linear(h0, load_operator_file(cfg["h1_file"]), _as_float(cfg, "g0"), _as_float(cfg, "dg"))


def _verify_rows(rows: list[list], indices, check) -> None:
    for idx in indices:
        problem = check(rows[idx])
        if problem:
            raise NumericError(f"verification failed on row {idx}: {problem}")


def _spot_indices(n_rows: int, seed: int) -> list[int]:
    take = max(1, n_rows // 100)
    rng = np.random.default_rng(seed ^ 0x5EED)
    return sorted(rng.choice(n_rows, size=min(take, n_rows), replace=False).tolist())


def _run_lz_sweep(args: argparse.Namespace) -> None:
    cfg = _resolve_config(args, "lz-sweep")
    grid = _grid(cfg, "g0")
    betas = _as_float_list(cfg, "betas")
    rows = lz_sweep(
        _as_float(cfg, "delta"),
        _as_float(cfg, "b"),
        grid,
        _as_float(cfg, "dg"),
        betas,
        threads=args.threads,
    )
    table = [[r.g0, r.beta, r.sigma_scaled, r.lcl_scaled, r.lqu_scaled] for r in rows]
    if args.verify:
        delta, b, dg = _as_float(cfg, "delta"), _as_float(cfg, "b"), _as_float(cfg, "dg")

        def check(row):
            g0, beta, sigma_s, lcl_s, lqu_s = row
            lcl, lqu = lz_budget_analytic(LZParams(delta=delta, b=b, g=g0), dg, beta)
            scale = 0.5 * beta * beta * dg * dg
            if abs(lcl / scale - lcl_s) > 1e-9 or abs(lqu / scale - lqu_s) > 1e-9:
                return "scaled shares do not reproduce"
            if min(lcl_s, lqu_s) < -1e-12 or sigma_s < -1e-12:
                return "negative entropy share"
            return None

        _verify_rows(table, _spot_indices(len(table), args.seed), check)
    write_csv(args.out, ["g0", "beta", "sigma_scaled", "lcl_scaled", "lqu_scaled"], table)
    write_metadata(args.out, "lz-sweep", cfg, args.seed, __version__)


def _xy_rows_to_table(rows) -> list[list]:
    return [
        [
            r.sweep_var,
            r.beta,
            "inf" if r.n_or_inf is None else r.n_or_inf,
            r.lcl_scaled,
            r.lqu_scaled,
            r.sigma_scaled,
            r.error_bound,
        ]
        for r in rows
    ]


_XY_HEADER = ["sweep_var", "beta", "n_or_inf", "lcl_scaled", "lqu_scaled", "sigma_scaled", "error_bound"]


def _run_xy_sweep(args: argparse.Namespace, kind: str) -> None:
    cli_kind = "xy-field-sweep" if kind == "field" else "xy-anisotropy-sweep"
    cfg = _resolve_config(args, cli_kind)
    if kind == "field":
        grid = _grid(cfg, "g0")
        fixed = _as_float(cfg, "gamma0")
    else:
        grid = _grid(cfg, "gamma0")
        fixed = _as_float(cfg, "g0")
    betas = _as_float_list(cfg, "betas")
    n = _as_int(cfg, "n") if cfg["n"].strip() else None
    rows = xy_sweep(kind, grid, fixed, betas, n=n, threads=args.threads)
    table = _xy_rows_to_table(rows)
    if args.verify:

        def check(row):
            v, beta, n_or_inf, lcl, lqu, sigma, _ = row
            if min(lcl, lqu) < -1e-12:
                return "negative entropy share"
            if abs(sigma - (lcl + lqu)) > 1e-12 * max(1.0, abs(sigma)):
                return "sigma does not match lcl + lqu"
            nn = None if n_or_inf == "inf" else int(n_or_inf)
            if kind == "field":
                p = XYParams(g=v, gamma=fixed, beta=beta, dg=1.0, n=nn)
            else:
                p = XYParams(g=fixed, gamma=v, beta=beta, dgamma=1.0, n=nn)
            again = lambdas_thermodynamic(p) if nn is None else lambdas_finite_n(p)
            if abs(again[0] - lcl) > 1e-9 or abs(again[1] - lqu) > 1e-9:
                return "recomputation disagrees"
            return None

        _verify_rows(table, _spot_indices(len(table), args.seed), check)
    write_csv(args.out, _XY_HEADER, table)
    write_metadata(args.out, cli_kind, cfg, args.seed, __version__)


def _run_ising_finite_n(args: argparse.Namespace) -> None:
    cfg = _resolve_config(args, "ising-finite-n")
    gamma0 = _as_float(cfg, "gamma0")
    n_values = _as_int_list(cfg, "n_values")
    betas = _as_float_list(cfg, "betas")
    grid = _grid(cfg, "g0")
    if not n_values:
        raise ValidationError("n_values must list at least one chain length")
    table = []
    for n in n_values:
        for g0 in grid:
            p = XYParams(g=float(g0), gamma=gamma0, n=n)
            lcl, lqu = ising_finite_n(p)
            bound = None
            if gamma0 == 1.0 and min(abs(g0 - 1.0), abs(g0 + 1.0)) >= 1e-9:
                bound = riemann_error_bound(float(g0), n)
            table.append([float(g0), 0.0, n, lcl, lqu, lcl + lqu, bound, "limit"])
        # finite-beta rows: exact pair-space budgets at a small dg, rescaled by dg^2
        dg = _as_float(cfg, "dg")
        for beta in betas:
            if beta <= 0:
                continue
            for g0 in grid:
                p = XYParams(g=float(g0), gamma=gamma0, beta=beta, dg=dg, n=n)
                lcl, lqu, sigma = (v / (dg * dg) for v in pair_budget_sum(p))
                table.append([float(g0), beta, n, lcl, lqu, sigma, None, "extended"])
    if args.verify:

        def check(row):
            g0, beta, n, lcl, lqu, sigma, bound, mode = row
            if min(lcl, lqu) < -1e-12:
                return "negative entropy share"
            if mode == "limit" and bound is not None:
                integral = lambdas_small_beta(XYParams(g=g0, gamma=gamma0, dg=1.0))
                if abs(lqu - integral[1]) > bound + 1e-12:
                    return "midpoint sum violates its error bound"
            return None

        _verify_rows(table, _spot_indices(len(table), args.seed), check)
    write_csv(args.out, _XY_HEADER + ["mode"], table)
    write_metadata(args.out, "ising-finite-n", cfg, args.seed, __version__)


def _run_tpm(args: argparse.Namespace) -> None:
    cfg = _resolve_config(args, "tpm-run")
    q = _load_quench(cfg)
    beta = _as_float(cfg, "beta")
    samples = _as_int(cfg, "samples")
    if samples > 0:
        ensemble, report = sample_trajectories(q, beta, samples, args.seed)
        weights = ensemble.counts
    else:
        ensemble = enumerate_paths(q, beta)
        report = fluctuation_report(ensemble)
        weights = [r.prob for r in ensemble.records]
    table = [
        [r.i, r.j, float(wgt), r.work, r.sigma, r.lambda_cl, r.lambda_qu]
        for r, wgt in zip(ensemble.records, weights)
    ]
    if args.verify and report.exact:
        if abs(report.ift_sigma - 1.0) > 1e-12 or abs(report.ift_lcl - 1.0) > 1e-12:
            raise NumericError("exact enumeration violates an integral fluctuation theorem")
    write_csv(args.out, ["i", "j", "prob_or_count", "w", "sigma", "lcl", "lqu"], table)
    report_lines = [
        f"ift_sigma = {report.ift_sigma:.17g}",
        f"jarzynski_gap = {report.jarzynski_gap:.17g}",
        f"ift_lcl = {report.ift_lcl:.17g}",
        f"ift_lqu = {report.ift_lqu:.17g}",
        f"exact = {report.exact}",
        f"n_samples = {report.n_samples}",
        f"seed = {args.seed if samples > 0 else None}",
    ]
    if report.std_errors:
        report_lines += [f"se_{k} = {v:.17g}" for k, v in sorted(report.std_errors.items())]
    report_text = "\n".join(report_lines) + "\n"
    with open(str(args.out) + ".report.txt", "w") as fh:
        fh.write(report_text)
    sys.stdout.write(report_text)
    write_metadata(args.out, "tpm-run", cfg, args.seed, __version__)


def _run_generic_quench(args: argparse.Namespace) -> None:
    cfg = _resolve_config(args, "generic-quench")
    q = _load_quench(cfg)
    betas = _as_float_list(cfg, "betas")
    if not betas:
        raise ValidationError("betas must list at least one inverse temperature")
    table = []
    for beta in betas:
        b = entropy_budget(q, beta)
        table.append(
            [b.beta, b.sigma, b.lambda_cl, b.lambda_qu, b.avg_work, b.delta_f, b.alt_population, b.alt_coherence]
        )
    if args.verify:

        def check(row):
            beta, sigma, lcl, lqu, _w, _f, pop, coh = row
            if sigma < -1e-12 or lcl < -1e-12 or lqu < -1e-12:
                return "negative entropy production"
            if abs(pop + coh - sigma) > 1e-10 * max(1.0, abs(sigma)):
                return "alternative split does not sum to sigma"
            return None

        _verify_rows(table, range(len(table)), check)
    write_csv(
        args.out,
        ["beta", "sigma", "lambda_cl", "lambda_qu", "avg_work", "delta_f", "alt_population", "alt_coherence"],
        table,
    )
    write_metadata(args.out, "generic-quench", cfg, args.seed, __version__)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="key = value config file")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--seed", type=int, default=0, help="seed for anything stochastic")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for grid points")
    sub.add_argument("--verify", action="store_true", help="re-run identity checks on a sample of rows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quenchkit",
        description="Sudden-quench entropy production experiments (CSV output).",
    )
    parser.add_argument("--version", action="version", version=f"quenchkit {__version__}")
    subs = parser.add_subparsers(dest="experiment", required=True)
    for kind, keys in _EXPERIMENT_KEYS.items():
        sub = subs.add_parser(kind, help=f"run the {kind} experiment")
        _add_common(sub)
        for key in keys:
            sub.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    return parser


_RUNNERS = {
    "lz-sweep": _run_lz_sweep,
    "xy-field-sweep": lambda args: _run_xy_sweep(args, "field"),
    "xy-anisotropy-sweep": lambda args: _run_xy_sweep(args, "anisotropy"),
    "ising-finite-n": _run_ising_finite_n,
    "tpm-run": _run_tpm,
    "generic-quench": _run_generic_quench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _RUNNERS[args.experiment](args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except QuenchKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
