"""Command-line entry points and the Monte Carlo experiment runner.

Exit codes: 0 success, 2 validation problem (bad flags, malformed
files), 3 estimation failure. Errors are emitted as a JSON body on
stderr so batch drivers can parse them.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import dataclasses
from dataclasses import dataclass

import numpy as np

from .classic import TwoPointConfig, estimate_classic
from .contrast import EstimatorConfig, EstimateResult, estimate_mce
from .errors import LfsmError, ParameterError, ConfigurationError
from .inference import bootstrap_ci, subsample_ci
from .limits import kappa1, kappa2, rho_l
from .model import LfsmParams, alpha_norm, beta_coeff, q_factor, regime_of, Regime
from .simulate import SimConfig, simulate_lfsm
from .stable import RngStream, a_p_constant
from .stats import SamplePath

__all__ = ["ExperimentSpec", "ResultTable", "run_montecarlo", "main"]

# stream ids for (cell, rep) pairs never collide as long as reps stay
# below this stride
_STREAM_STRIDE = 1_000_000


@dataclass(frozen=True)
class ExperimentSpec:
    """A Monte Carlo experiment: a parameter grid times a rep count."""

    grid: tuple
    n: int
    reps: int
    estimator: str = "mce"
    seed: int = 0
    p: float = -0.4
    k: int = 2
    nu: float = 0.1
    m: int = 256
    M: int = 600
    threads: int = 1

    def __post_init__(self) -> None:
        if self.reps < 1 or not self.grid:
            raise ConfigurationError("need reps >= 1 and a nonempty grid")
        if self.estimator not in ("mce", "classic", "both"):
            raise ConfigurationError(f"unknown estimator {self.estimator!r}")
        cells = tuple(tuple(float(v) for v in cell) for cell in self.grid)
        for cell in cells:
            if len(cell) != 3:
                raise ConfigurationError(f"grid cell {cell} is not a (sigma, alpha, H) triple")
        object.__setattr__(self, "grid", cells)

    @classmethod
    def from_json(cls, payload: dict) -> "ExperimentSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(payload) - known
        if extra:
            raise ConfigurationError(f"unknown spec fields: {sorted(extra)}")
        missing = {"grid", "n", "reps"} - set(payload)
        if missing:
            raise ConfigurationError(f"spec is missing fields: {sorted(missing)}")
        return cls(**payload)


@dataclass(frozen=True)
class ResultTable:
    """Per-cell aggregates plus optional per-rep raw estimates."""

    rows: tuple
    raw: tuple = ()

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "raw": list(self.raw)}

    @classmethod
    def from_dict(cls, payload: dict) -> "ResultTable":
        return cls(rows=tuple(payload["rows"]), raw=tuple(payload.get("raw", ())))


def _one_rep(spec: ExperimentSpec, cell_idx: int, rep: int):
    sigma0, alpha0, h0 = spec.grid[cell_idx]
    params = LfsmParams(sigma=sigma0, alpha=alpha0, hurst=h0)
    sim = SimConfig(
        params=params, n=spec.n, m=spec.m, M=spec.M,
        seed=RngStream(spec.seed, cell_idx * _STREAM_STRIDE + rep),
    )
    path = simulate_lfsm(sim)
    out = {}
    if spec.estimator in ("mce", "both"):
        cfg = EstimatorConfig(p=spec.p, k=spec.k, nu=spec.nu)
        try:
            out["mce"] = estimate_mce(path, cfg).to_dict()
        except LfsmError as exc:
            out["mce"] = _failed_result(str(exc))
    if spec.estimator in ("classic", "both"):
        cfg2 = TwoPointConfig(p=spec.p, k=spec.k)
        try:
            out["classic"] = estimate_classic(path, cfg2).to_dict()
        except LfsmError as exc:
            out["classic"] = _failed_result(str(exc))
    return out


def _failed_result(message: str) -> dict:
    return {
        "sigma": None, "alpha": None, "hurst": None, "objective": None,
        "iterations": 0, "converged": False, "failed": True, "error": message,
    }


def _aggregate(cell, n: int, k: int, name: str, reps: list) -> dict:
    truth = np.array(cell)
    ok = [r for r in reps if not r["failed"]]
    row = {
        "sigma0": cell[0], "alpha0": cell[1], "hurst0": cell[2],
        "n": n, "estimator": name,
        "reps": len(reps), "reps_used": len(ok),
        "failure_rate": 1.0 - len(ok) / len(reps),
        "stable_regime": regime_of(LfsmParams(*cell), k) is Regime.STABLE,
    }
    if ok:
        est = np.array([[r["sigma"], r["alpha"], r["hurst"]] for r in ok])
        bias = np.abs(est.mean(axis=0) - truth)
        sd = est.std(axis=0, ddof=1) if len(ok) > 1 else np.zeros(3)
        row["low_rep_warning"] = len(ok) < 2
        for i, coord in enumerate(("sigma", "alpha", "hurst")):
            row[f"bias_{coord}"] = float(bias[i])
            row[f"sd_{coord}"] = float(sd[i])
    else:
        row["low_rep_warning"] = True
    return row


def run_montecarlo(spec: ExperimentSpec, keep_raw: bool = False) -> ResultTable:
    """Simulate-estimate-aggregate over the grid.

    Each (cell, rep) pair owns an indexed RNG stream, so the table is
    identical for any parallelism degree.
    """
    if spec.reps >= _STREAM_STRIDE:
        raise ConfigurationError(f"reps must stay below {_STREAM_STRIDE}")
    jobs = [(ci, rep) for ci in range(len(spec.grid)) for rep in range(spec.reps)]
    if spec.threads > 1:
        with concurrent.futures.ThreadPoolExecutor(spec.threads) as pool:
            results = list(pool.map(lambda j: _one_rep(spec, *j), jobs))
    else:
        results = [_one_rep(spec, *job) for job in jobs]
    by_cell: dict = {}
    raw = []
    for (ci, rep), res in zip(jobs, results):
        for name, payload in res.items():
            by_cell.setdefault((ci, name), []).append(payload)
            if keep_raw:
                raw.append({"cell": ci, "rep": rep, "estimator": name, **payload})
    rows = []
    for ci in range(len(spec.grid)):
        for name in ("mce", "classic"):
            if (ci, name) in by_cell:
                rows.append(
                    _aggregate(spec.grid[ci], spec.n, spec.k, name, by_cell[(ci, name)])
                )
    return ResultTable(rows=tuple(rows), raw=tuple(raw))


# ---------------------------------------------------------------------------
# file I/O


def read_path_csv(filename: str) -> SamplePath:
    """One observation per line; an optional single header line `x`."""
    values = []
    with open(filename, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if lineno == 1 and text == "x":
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ParameterError(
                    f"{filename}:{lineno}: not a number: {text!r}"
                ) from None
    if not values:
        raise ParameterError(f"{filename}: no observations found")
    return SamplePath(values=np.array(values))


def write_path_csv(path: SamplePath, filename: str) -> None:
    with open(filename, "w", encoding="utf-8") as fh:
        fh.write("x\n")
        for v in path.values:
            fh.write(f"{float(v)!r}\n")


# ---------------------------------------------------------------------------
# argument parsing


def _add_param_flags(sp, with_hurst: bool = True) -> None:
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    if with_hurst:
        sp.add_argument("--hurst", type=float, required=True)


def _add_estimator_flags(sp) -> None:
    sp.add_argument("--p", type=float, default=-0.4)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--nu", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfsmlab",
        description="Simulation and estimation for linear fractional stable motion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="generate a synthetic path as CSV")
    _add_param_flags(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--m", type=int, default=256)
    sp.add_argument("--M", type=int, default=600)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("estimate", help="minimal contrast fit of a path file")
    sp.add_argument("path")
    _add_estimator_flags(sp)

    sp = sub.add_parser("estimate-classic", help="two-point closed-form fit")
    sp.add_argument("path")
    sp.add_argument("--p", type=float, default=-0.4)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--t1", type=float, default=1.0)
    sp.add_argument("--t2", type=float, default=2.0)

    sp = sub.add_parser("bootstrap", help="parametric bootstrap confidence region")
    sp.add_argument("path")
    _add_estimator_flags(sp)
    sp.add_argument("--resamples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--level", type=float, default=0.95)
    sp.add_argument("--m", type=int, default=256)
    sp.add_argument("--M", type=int, default=600)

    sp = sub.add_parser("subsample", help="blockwise subsampling confidence region")
    sp.add_argument("path")
    _add_estimator_flags(sp)
    sp.add_argument("--groups", type=int, required=True)
    sp.add_argument("--level", type=float, default=0.95)

    sp = sub.add_parser("montecarlo", help="run an experiment spec (JSON)")
    sp.add_argument("spec")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--raw", action="store_true", help="keep per-rep estimates")
    sp.add_argument("--threads", type=int, default=None)

    sp = sub.add_parser("oracle", help="inspect model and limit-theory constants")
    sp.add_argument(
        "quantity",
        choices=["alpha-norm", "beta", "q", "a-p", "rho", "kappa1", "kappa2"],
    )
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--hurst", type=float)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--p", type=float, default=-0.4)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--t", type=float, default=1.0)

    return parser


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _emit_error(kind: str, message: str) -> None:
    json.dump({"error": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")


def _cmd_simulate(args) -> int:
    params = LfsmParams(sigma=args.sigma, alpha=args.alpha, hurst=args.hurst)
    cfg = SimConfig(
        params=params, n=args.n, m=args.m, M=args.M,
        seed=RngStream(args.seed, args.stream),
    )
    write_path_csv(simulate_lfsm(cfg), args.output)
    return 0


def _finish_estimate(result: EstimateResult) -> int:
    _emit(result.to_dict())
    if result.failed:
        _emit_error("estimation", "fit failed (alpha outside (0,2) or no convergence)")
        return 3
    return 0


def _cmd_estimate(args) -> int:
    path = read_path_csv(args.path)
    cfg = EstimatorConfig(p=args.p, k=args.k, nu=args.nu)
    return _finish_estimate(estimate_mce(path, cfg))


def _cmd_estimate_classic(args) -> int:
    path = read_path_csv(args.path)
    cfg = TwoPointConfig(t1=args.t1, t2=args.t2, p=args.p, k=args.k)
    return _finish_estimate(estimate_classic(path, cfg))


def _cmd_bootstrap(args) -> int:
    path = read_path_csv(args.path)
    cfg = EstimatorConfig(p=args.p, k=args.k, nu=args.nu)
    region = bootstrap_ci(
        path, cfg, args.resamples, RngStream(args.seed, 0),
        level=args.level, m=args.m, M=args.M,
    )
    _emit(region.to_dict())
    return 0


def _cmd_subsample(args) -> int:
    path = read_path_csv(args.path)
    cfg = EstimatorConfig(p=args.p, k=args.k, nu=args.nu)
    region = subsample_ci(path, args.groups, cfg, level=args.level)
    _emit(region.to_dict())
    return 0


def _resolve_threads(flag_value, spec_value: int) -> int:
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get("LFSM_LAB_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(
                f"LFSM_LAB_THREADS must be an integer, got {env!r}"
            ) from None
    return spec_value


def _cmd_montecarlo(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read spec {args.spec}: {exc}") from None
    spec = ExperimentSpec.from_json(payload)
    spec = dataclasses.replace(spec, threads=_resolve_threads(args.threads, spec.threads))
    table = run_montecarlo(spec, keep_raw=args.raw)
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_oracle(args) -> int:
    if args.quantity != "a-p" and (args.alpha is None or args.hurst is None):
        raise ConfigurationError("--alpha and --hurst are required")
    out = {"quantity": args.quantity}
    if args.quantity == "a-p":
        out["value"] = a_p_constant(args.p)
        out["p"] = args.p
    else:
        params = LfsmParams(sigma=args.sigma, alpha=args.alpha, hurst=args.hurst)
        out.update({"sigma": args.sigma, "alpha": args.alpha,
                    "hurst": args.hurst, "k": args.k})
        if args.quantity == "alpha-norm":
            out["value"] = alpha_norm(args.k, params, r=args.r)
        elif args.quantity == "beta":
            out["value"] = beta_coeff(params, args.k)
        elif args.quantity == "q":
            out["value"] = q_factor(params, args.k)
        elif args.quantity == "rho":
            out["value"] = rho_l(args.k, params, args.l)
            out["l"] = args.l
        elif args.quantity == "kappa1":
            out["value"] = kappa1(args.r, params, args.p, args.k)
            out["r"], out["p"] = args.r, args.p
        elif args.quantity == "kappa2":
            out["value"] = kappa2(args.t, params, args.k)
            out["t"] = args.t
    _emit(out)
    return 0


_DISPATCH = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "estimate-classic": _cmd_estimate_classic,
    "bootstrap": _cmd_bootstrap,
    "subsample": _cmd_subsample,
    "montecarlo": _cmd_montecarlo,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (ParameterError, ConfigurationError, OSError) as exc:
        _emit_error("validation", str(exc))
        return 2
    except LfsmError as exc:
        _emit_error("estimation", str(exc))
        return 3


if __name__ == "__main__":
    sys.exit(main())
