"""Experiment runner CLI.

Subcommands:

* ``run``    head-to-head solver runs over seeds; CSV traces + summary + ratios
* ``ratios`` print the theoretical bound-constant ratios for a dataset/problem
* ``gen``    write a synthetic dataset in LIBSVM format
* ``check``  fast self-contained invariant battery (exit 1 on failure)
* ``bench``  time the numba kernels against the pure-numpy fallback

Configuration is flat ``key=value`` lines (``--config FILE``) with command
line flags taking precedence.  Trace CSVs are byte-reproducible for a fixed
config and seed; wall-clock timings therefore go to a sidecar file instead of
the trace rows.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, diagnostics, losses, sampling
from ._backend import BACKEND, numba_available
from .data import LabeledDataset, ProblemSpec, smoothed_l1_problem
from .dataio import SyntheticSpec, generate_synthetic, parse_libsvm, split, write_libsvm
from .sdca import SdcaConfig, run_sdca
from .sgd import Schedule, SgdConfig, run_sgd

CSV_COLUMNS = ("epoch", "primal", "dual", "gap", "variance", "test_error", "wall_time")

LOSS_CHOICES = ("hinge", "sqhinge")
REG_CHOICES = ("l2", "l1-smoothed")


@dataclass
class AlgoSpec:
    family: str        # sgd | sdca
    sampling: str      # uniform | lipschitz | smoothness | oracle | smooth
    option: str = "I"  # sdca only
    raw: str = ""

    @classmethod
    def parse(cls, text: str) -> "AlgoSpec":
        parts = text.split(":")
        if len(parts) < 2:
            raise ValueError(f"algorithm spec {text!r} must look like family:sampling[:optionX]")
        family, samp = parts[0], parts[1]
        if family == "sgd":
            if len(parts) > 2:
                raise ValueError(f"sgd spec {text!r} takes no option suffix")
            if samp not in ("uniform", "lipschitz", "smoothness", "oracle"):
                raise ValueError(f"unknown sgd sampling {samp!r}")
            return cls("sgd", samp, raw=text)
        if family == "sdca":
            if samp not in ("uniform", "smooth", "lipschitz"):
                raise ValueError(f"unknown sdca sampling {samp!r}")
            option = "I"
            if len(parts) > 2:
                tag = parts[2]
                if not tag.startswith("option"):
                    raise ValueError(f"bad option suffix in {text!r}")
                option = tag[len("option"):]
            return cls("sdca", samp, option, raw=text)
        raise ValueError(f"unknown solver family {family!r}")


@dataclass
class ExperimentConfig:
    loss: str = "sqhinge"
    reg: str = "l2"
    lam: float = 1e-4
    epsilon: float = 1e-3          # accuracy knob for the l1 surrogate delta
    epochs: int = 5
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    algos: list[AlgoSpec] = field(default_factory=list)
    out: Path = Path("results")
    data: Path | None = None
    synthetic: SyntheticSpec | None = None
    test_fraction: float | None = None
    uniform_first_epoch: bool = True
    sgd_schedule: str = "lambda_t"  # lambda_t | constant | strong
    sgd_eta: float = 0.01
    sgd_alpha: float = 1.0
    sgd_mu: float = 0.0

    def validate(self) -> None:
        if not self.algos:
            raise ValueError("at least one --algo is required")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.loss not in LOSS_CHOICES or self.reg not in REG_CHOICES:
            raise ValueError("unknown loss/reg combination")
        if self.data is None and self.synthetic is None:
            raise ValueError("either --data or synthetic parameters are required")
        loss = losses.canonical_kind(self.loss)
        for spec in self.algos:
            if spec.family == "sdca":
                from .sdca import validate_sdca
                validate_sdca(self.sdca_problem(),
                              SdcaConfig(option=spec.option, sampling=spec.sampling))
            elif spec.sampling == "smoothness" and loss != losses.SQUARED_HINGE:
                raise ValueError("sgd:smoothness requires the squared hinge loss")

    def sgd_problem(self) -> ProblemSpec:
        loss = losses.canonical_kind(self.loss)
        if self.reg == "l2":
            # ridge term rides inside the sampled loss; project onto 1/sqrt(lam)
            return ProblemSpec(loss=loss, regularizer="none", lam=self.lam,
                               composite=True, radius=1.0 / np.sqrt(self.lam))
        return ProblemSpec(loss=loss, regularizer="l1", lam=self.lam,
                           radius=1.0 / self.lam)

    def sdca_problem(self) -> ProblemSpec:
        loss = losses.canonical_kind(self.loss)
        if self.reg == "l2":
            return ProblemSpec(loss=loss, regularizer="l2", lam=self.lam)
        return smoothed_l1_problem(loss, self.lam, self.epsilon)

    def schedule(self) -> Schedule:
        if self.sgd_schedule == "lambda_t":
            return Schedule("inverse_lambda_t", lam=self.lam)
        if self.sgd_schedule == "constant":
            return Schedule("constant", eta=self.sgd_eta)
        if self.sgd_schedule == "strong":
            return Schedule("inverse_strong", alpha=self.sgd_alpha, mu=self.sgd_mu)
        raise ValueError(f"unknown sgd schedule {self.sgd_schedule!r}")


def load_dataset(config: ExperimentConfig) -> LabeledDataset:
    if config.data is not None:
        return parse_libsvm(config.data)
    return generate_synthetic(config.synthetic)


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_trace_csv(path: Path, trace) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for rec in trace:
        # wall time is not reproducible; it goes to the timings sidecar instead
        lines.append(",".join([
            _fmt(rec.epoch), _fmt(rec.primal), _fmt(rec.dual), _fmt(rec.gap),
            _fmt(rec.variance), _fmt(rec.test_error), "",
        ]))
    path.write_text("\n".join(lines) + "\n")


def _column_stats(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    return statistics.fmean(vals), statistics.median(vals)


def write_summary_csv(path: Path, per_algo_traces: dict) -> None:
    header = ["algo", "epoch"]
    for col in ("primal", "dual", "gap", "variance", "test_error"):
        header += [f"{col}_mean", f"{col}_median"]
    lines = [",".join(header)]
    for algo, traces in per_algo_traces.items():
        n_rows = min(len(t) for t in traces)
        for r in range(n_rows):
            row = [algo, _fmt(traces[0][r].epoch)]
            for col in ("primal", "dual", "gap", "variance", "test_error"):
                mean, median = _column_stats([getattr(t[r], col) for t in traces])
                row += [_fmt(mean), _fmt(median)]
            lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def compute_ratios(dataset: LabeledDataset, config: ExperimentConfig) -> dict:
    out = {}
    bounds = losses.sgd_gradient_bounds(config.sgd_problem(), dataset)
    out["sgd"] = diagnostics.constant_ratio_sgd(bounds)
    if losses.canonical_kind(config.loss) == losses.SQUARED_HINGE:
        sdca_prob = config.sdca_problem()
        _, gamma = losses.per_example_constants(sdca_prob.loss, dataset)
        out["sdca"] = diagnostics.constant_ratio_sdca(gamma, sdca_prob.lam, dataset.n)
    else:
        out["sdca"] = None
    return out


def run_experiment(config: ExperimentConfig) -> int:
    config.validate()
    dataset = load_dataset(config)
    test_set = None
    if config.test_fraction:
        dataset, test_set = split(dataset, config.test_fraction, seed=12345)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)

    timings = []
    per_algo_traces = {}
    for spec in config.algos:
        traces = []
        for seed in config.seeds:
            started = time.perf_counter()
            if spec.family == "sgd":
                run_cfg = SgdConfig(
                    schedule=config.schedule(), epochs=config.epochs,
                    sampling=spec.sampling, seed=seed,
                    uniform_first_epoch=config.uniform_first_epoch,
                )
                result = run_sgd(dataset, config.sgd_problem(), run_cfg, test_set=test_set)
            else:
                run_cfg = SdcaConfig(
                    option=spec.option, sampling=spec.sampling, epochs=config.epochs,
                    seed=seed, uniform_first_epoch=config.uniform_first_epoch,
                )
                result = run_sdca(dataset, config.sdca_problem(), run_cfg, test_set=test_set)
            elapsed = time.perf_counter() - started
            name = spec.raw.replace(":", "-")
            write_trace_csv(out / f"{name}_seed{seed}.csv", result.trace)
            timings.append(f"{name}_seed{seed}: {elapsed:.3f}s")
            traces.append(result.trace)
        per_algo_traces[spec.raw] = traces

    write_summary_csv(out / "summary.csv", per_algo_traces)
    ratios = compute_ratios(dataset, config)
    ratio_lines = ["name,value"]
    for key, value in ratios.items():
        ratio_lines.append(f"{key},{'' if value is None else repr(value)}")
    (out / "ratios.csv").write_text("\n".join(ratio_lines) + "\n")
    (out / "timings.txt").write_text("\n".join(timings) + "\n")
    print(f"wrote {len(config.algos) * len(config.seeds)} trace files to {out}")
    return 0


def print_ratios(dataset: LabeledDataset, config: ExperimentConfig) -> None:
    ratios = compute_ratios(dataset, config)
    print(f"dataset: n={dataset.n} d={dataset.dim}")
    print(f"sgd constant ratio:  {ratios['sgd']:.4f}")
    if ratios["sdca"] is None:
        print("sdca constant ratio: n/a (needs a smooth loss)")
    else:
        print(f"sdca constant ratio: {ratios['sdca']:.4f}")


# --------------------------------------------------------------------------
# check: quick invariant battery

def _check_battery(quick: bool) -> list[tuple[str, bool, str]]:
    from . import regularizers
    from .data import DualState
    from .sdca import dual_objective, sdca_step

    rng = np.random.default_rng(2024)
    results = []

    def record(name, fn):
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report, don't crash the battery
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    def sampling_mass():
        for n in (1, 7, 100):
            p = rng.random(n) + 1e-3
            dist = sampling.build_lipschitz(p)
            assert abs(dist.p.sum() - 1.0) < 1e-12
            assert dist.p.min() > 0
            assert np.abs(dist.implied_mass() - dist.p).max() < 1e-12

    def sampling_frequencies():
        dist = sampling.build_lipschitz(np.array([1.0, 2.0, 3.0, 4.0]))
        draws = sampling.draw_many(dist, np.random.default_rng(7), 200_000)
        freq = np.bincount(draws, minlength=4) / draws.size
        assert np.abs(freq - dist.p).max() < 0.01

    def prox_certificate():
        for _ in range(5 if quick else 25):
            x = rng.standard_normal(6)
            c = float(rng.random() + 0.1)
            for kind, ratio in (("l1", 0.0), ("l2", 0.0), ("l2_plus_scaled_l1", 0.7)):
                p = regularizers.prox(kind, c, x, ratio)
                base = c * regularizers.regularizer_value(kind, p, ratio) + 0.5 * np.sum((p - x) ** 2)
                for _ in range(40):
                    q = p + 0.1 * rng.standard_normal(6)
                    alt = c * regularizers.regularizer_value(kind, q, ratio) + 0.5 * np.sum((q - x) ** 2)
                    assert base <= alt + 1e-12

    def weighted_gradient_unbiased():
        data = generate_synthetic(SyntheticSpec(n=40, d=8, nnz_per_example=4, seed=3))
        problem = ProblemSpec(loss="squared_hinge", regularizer="l2", lam=0.05)
        w = rng.standard_normal(8)
        dist = sampling.build_lipschitz(rng.random(40) + 0.1)
        full = diagnostics.mean_gradient(w, data, problem)
        acc = np.zeros(8)
        for i in range(40):
            lo, hi = data.indptr[i], data.indptr[i + 1]
            g = np.zeros(8)
            m = data.labels[i] * np.dot(w[data.indices[lo:hi]], data.values[lo:hi])
            coef = losses.subgradient_coef(problem.loss, m, data.labels[i])
            g[data.indices[lo:hi]] = coef * data.values[lo:hi]
            acc += dist.p[i] * g / (40 * dist.p[i])
        assert np.abs(acc - full).max() < 1e-12
        v1 = diagnostics.gradient_variance(w, data, problem, dist)
        v2 = diagnostics.gradient_variance_identity(w, data, problem, dist)
        assert abs(v1 - v2) <= 1e-10 * max(1.0, abs(v1))

    def tiny_sdca_run():
        data = generate_synthetic(SyntheticSpec(n=60, d=10, nnz_per_example=5, seed=5))
        problem = ProblemSpec(loss="squared_hinge", regularizer="l2", lam=0.05)
        state = DualState.zeros(60, 10)
        prev = dual_objective(state, data, problem)
        for i in np.random.default_rng(0).integers(0, 60, 300):
            sdca_step(state, data, problem, int(i), option="I")
            cur = dual_objective(state, data, problem)
            assert cur >= prev - 1e-12
            prev = cur
        state.check_v(data, problem.lam)
        gap = diagnostics.primal_objective(state.w, data, problem) - prev
        assert gap >= -1e-10

    def sgd_determinism():
        data = generate_synthetic(SyntheticSpec(n=50, d=8, nnz_per_example=4, seed=1))
        problem = ProblemSpec(loss="squared_hinge", regularizer="none", lam=0.05,
                              composite=True, radius=1.0 / np.sqrt(0.05))
        cfg = SgdConfig(schedule=Schedule("inverse_lambda_t", lam=0.05),
                        epochs=2, sampling="lipschitz", seed=11)
        r1 = run_sgd(data, problem, cfg)
        r2 = run_sgd(data, problem, cfg)
        assert np.array_equal(r1.w_last, r2.w_last)
        assert [t.primal for t in r1.trace] == [t.primal for t in r2.trace]

    def ratio_bounds():
        for _ in range(200 if quick else 2000):
            g = rng.random(rng.integers(2, 30)) + 1e-6
            assert diagnostics.constant_ratio_sgd(g) >= 1.0 - 1e-12
            assert diagnostics.constant_ratio_sdca(g, 0.1, g.size) >= 1.0 - 1e-12
        assert diagnostics.constant_ratio_sgd(np.full(17, 0.3)) == 1.0

    record("sampling-mass", sampling_mass)
    record("sampling-frequency", sampling_frequencies)
    record("prox-certificate", prox_certificate)
    record("weighted-gradient-unbiased", weighted_gradient_unbiased)
    record("sdca-monotone-feasible", tiny_sdca_run)
    record("sgd-determinism", sgd_determinism)
    record("ratio-bounds", ratio_bounds)
    return results


def run_check(quick: bool) -> int:
    results = _check_battery(quick)
    failures = 0
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  {detail}" if detail else ""))
        failures += 0 if ok else 1
    return 1 if failures else 0


# --------------------------------------------------------------------------
# bench: numba kernels vs the pure-numpy fallback

def _bench_workload(n: int, d: int, epochs: int, seed: int) -> dict:
    data = generate_synthetic(SyntheticSpec(
        n=n, d=d, nnz_per_example=min(10, d), norm_skew="lognormal", sigma=1.0, seed=seed))
    lam = 1e-2
    sgd_problem = ProblemSpec(loss="squared_hinge", regularizer="none", lam=lam,
                              composite=True, radius=1.0 / np.sqrt(lam))
    sdca_problem = ProblemSpec(loss="squared_hinge", regularizer="l2", lam=lam)
    sgd_cfg = SgdConfig(schedule=Schedule("inverse_lambda_t", lam=lam),
                        epochs=epochs, sampling="lipschitz", seed=seed)
    sdca_cfg = SdcaConfig(option="I", sampling="smooth", epochs=epochs, seed=seed)
    # warm pass triggers any jit compilation outside the timed region
    run_sgd(data, sgd_problem, SgdConfig(schedule=sgd_cfg.schedule, epochs=1,
                                         sampling="lipschitz", seed=seed), kernels=None)
    run_sdca(data, sdca_problem, SdcaConfig(option="I", sampling="smooth", epochs=1,
                                            seed=seed), kernels=None)
    t0 = time.perf_counter()
    sgd_res = run_sgd(data, sgd_problem, sgd_cfg)
    t1 = time.perf_counter()
    sdca_res = run_sdca(data, sdca_problem, sdca_cfg)
    t2 = time.perf_counter()
    return {
        "backend": BACKEND,
        "sgd_seconds": t1 - t0,
        "sdca_seconds": t2 - t1,
        "sgd_final_primal": sgd_res.trace[-1].primal,
        "sdca_final_gap": sdca_res.trace[-1].gap,
        "w_sgd": sgd_res.w_last.tolist(),
        "w_sdca": sdca_res.state.w.tolist(),
    }


def run_bench(n: int, d: int, epochs: int, seed: int) -> int:
    backends = ["numba", "numpy"] if numba_available() else ["numpy"]
    reports = {}
    for backend in backends:
        cmd = [sys.executable, "-m", "impopt.cli", "bench-worker",
               "--n", str(n), "--d", str(d), "--epochs", str(epochs), "--seed", str(seed)]
        env = dict(os.environ, IMPOPT_BACKEND=backend)
        proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        reports[backend] = json.loads(proc.stdout)
    print(f"workload: n={n} d={d} epochs={epochs} (times exclude jit warmup)")
    for backend, rep in reports.items():
        print(f"  {backend:>5}: sgd {rep['sgd_seconds']:.3f}s   sdca {rep['sdca_seconds']:.3f}s")
    if len(reports) == 2:
        a, b = reports["numba"], reports["numpy"]
        dev_sgd = np.abs(np.array(a["w_sgd"]) - np.array(b["w_sgd"])).max()
        dev_sdca = np.abs(np.array(a["w_sdca"]) - np.array(b["w_sdca"])).max()
        print(f"  max |w_numba - w_numpy|: sgd {dev_sgd:.3e}   sdca {dev_sdca:.3e}")
        speed = b["sgd_seconds"] / max(a["sgd_seconds"], 1e-9)
        print(f"  sgd speedup: {speed:.1f}x")
        if max(dev_sgd, dev_sdca) > 1e-8:
            print("  WARNING: backends disagree beyond 1e-8")
            return 1
    return 0


# --------------------------------------------------------------------------
# argument plumbing

def _parse_config_file(path: Path) -> dict:
    values = {}
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        values[key.strip()] = value.strip()
    return values


def _synthetic_from(values: dict) -> SyntheticSpec | None:
    if values.get("synthetic_n") is None:
        return None
    return SyntheticSpec(
        n=int(values["synthetic_n"]),
        d=int(values.get("synthetic_d") or 50),
        nnz_per_example=int(values.get("synthetic_nnz") or 10),
        norm_skew=values.get("synthetic_skew") or "lognormal",
        sigma=float(values.get("synthetic_sigma") if values.get("synthetic_sigma") is not None else 1.0),
        noise_rate=float(values.get("synthetic_noise") or 0.0),
        seed=int(values.get("synthetic_seed") or 0),
    )


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


def build_experiment_config(args) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(_parse_config_file(Path(args.config)))
    cli_map = {
        "data": args.data, "loss": args.loss, "reg": args.reg, "lambda": args.lam,
        "epsilon": args.epsilon, "epochs": args.epochs, "seeds": args.seeds,
        "algos": ",".join(args.algo) if args.algo else None, "out": args.out,
        "test_fraction": args.test_fraction,
        "uniform_first_epoch": (None if args.uniform_first_epoch is None
                                 else args.uniform_first_epoch),
        "sgd_schedule": args.sgd_schedule, "sgd_eta": args.sgd_eta,
        "sgd_alpha": args.sgd_alpha, "sgd_mu": args.sgd_mu,
        "synthetic_n": args.synthetic_n, "synthetic_d": args.synthetic_d,
        "synthetic_nnz": args.synthetic_nnz, "synthetic_skew": args.synthetic_skew,
        "synthetic_sigma": args.synthetic_sigma, "synthetic_noise": args.synthetic_noise,
        "synthetic_seed": args.synthetic_seed,
    }
    for key, value in cli_map.items():
        if value is not None:
            values[key] = value
    config = ExperimentConfig()
    if "loss" in values:
        config.loss = str(values["loss"])
    if "reg" in values:
        config.reg = str(values["reg"])
    if "lambda" in values:
        config.lam = float(values["lambda"])
    if "epsilon" in values:
        config.epsilon = float(values["epsilon"])
    if "epochs" in values:
        config.epochs = int(values["epochs"])
    if "seeds" in values:
        raw = values["seeds"]
        config.seeds = ([int(s) for s in raw.split(",") if s.strip()]
                        if isinstance(raw, str) else [int(s) for s in raw])
    if "algos" in values:
        config.algos = [AlgoSpec.parse(a.strip())
                        for a in str(values["algos"]).split(",") if a.strip()]
    if "out" in values:
        config.out = Path(values["out"])
    if "data" in values and values["data"]:
        config.data = Path(values["data"])
    if "test_fraction" in values:
        config.test_fraction = float(values["test_fraction"])
    if "uniform_first_epoch" in values:
        config.uniform_first_epoch = _bool(values["uniform_first_epoch"])
    for key in ("sgd_schedule",):
        if key in values:
            config.sgd_schedule = str(values[key])
    for key in ("sgd_eta", "sgd_alpha", "sgd_mu"):
        if key in values:
            setattr(config, key, float(values[key]))
    config.synthetic = _synthetic_from(values)
    return config


def _add_synthetic_flags(parser):
    parser.add_argument("--synthetic-n", type=int, dest="synthetic_n")
    parser.add_argument("--synthetic-d", type=int, dest="synthetic_d")
    parser.add_argument("--synthetic-nnz", type=int, dest="synthetic_nnz")
    parser.add_argument("--synthetic-skew", choices=("uniform", "lognormal"),
                        dest="synthetic_skew")
    parser.add_argument("--synthetic-sigma", type=float, dest="synthetic_sigma")
    parser.add_argument("--synthetic-noise", type=float, dest="synthetic_noise")
    parser.add_argument("--synthetic-seed", type=int, dest="synthetic_seed")


def _add_problem_flags(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--data", help="LIBSVM dataset path (.gz ok)")
    parser.add_argument("--loss", choices=LOSS_CHOICES)
    parser.add_argument("--reg", choices=REG_CHOICES)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--epsilon", type=float,
                        help="target accuracy for the smoothed-l1 surrogate")
    _add_synthetic_flags(parser)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="impopt",
                                     description="importance-sampled solvers benchmark")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run solver head-to-heads and write CSV traces")
    _add_problem_flags(run_p)
    run_p.add_argument("--epochs", type=int)
    run_p.add_argument("--seeds", help="comma-separated seed list")
    run_p.add_argument("--algo", action="append",
                       help="solver spec, e.g. sgd:uniform or sdca:smooth:optionI")
    run_p.add_argument("--out", help="output directory")
    run_p.add_argument("--test-fraction", dest="test_fraction", type=float)
    run_p.add_argument("--uniform-first-epoch", dest="uniform_first_epoch",
                       action="store_true", default=None)
    run_p.add_argument("--no-uniform-first-epoch", dest="uniform_first_epoch",
                       action="store_false")
    run_p.add_argument("--sgd-schedule", choices=("lambda_t", "constant", "strong"),
                       dest="sgd_schedule")
    run_p.add_argument("--sgd-eta", type=float, dest="sgd_eta")
    run_p.add_argument("--sgd-alpha", type=float, dest="sgd_alpha")
    run_p.add_argument("--sgd-mu", type=float, dest="sgd_mu")

    ratios_p = sub.add_parser("ratios", help="print theoretical constant ratios")
    _add_problem_flags(ratios_p)

    gen_p = sub.add_parser("gen", help="generate a synthetic LIBSVM dataset")
    gen_p.add_argument("--out", required=True)
    gen_p.add_argument("--n", type=int, required=True)
    gen_p.add_argument("--d", type=int, required=True)
    gen_p.add_argument("--nnz", type=int, default=10)
    gen_p.add_argument("--skew", choices=("uniform", "lognormal"), default="lognormal")
    gen_p.add_argument("--sigma", type=float, default=1.0)
    gen_p.add_argument("--noise", type=float, default=0.0)
    gen_p.add_argument("--seed", type=int, default=0)

    check_p = sub.add_parser("check", help="run the built-in invariant battery")
    check_p.add_argument("--quick", action="store_true")

    bench_p = sub.add_parser("bench", help="compare numba and numpy kernel backends")
    bench_p.add_argument("--n", type=int, default=20000)
    bench_p.add_argument("--d", type=int, default=100)
    bench_p.add_argument("--epochs", type=int, default=5)
    bench_p.add_argument("--seed", type=int, default=0)

    worker_p = sub.add_parser("bench-worker", help="internal: timed single-backend run")
    worker_p.add_argument("--n", type=int, required=True)
    worker_p.add_argument("--d", type=int, required=True)
    worker_p.add_argument("--epochs", type=int, required=True)
    worker_p.add_argument("--seed", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run_experiment(build_experiment_config(args))
        if args.command == "ratios":
            config = build_experiment_config(argparse.Namespace(
                config=args.config, data=args.data, loss=args.loss, reg=args.reg,
                lam=args.lam, epsilon=args.epsilon, epochs=None, seeds=None,
                algo=None, out=None, test_fraction=None, uniform_first_epoch=None,
                sgd_schedule=None, sgd_eta=None, sgd_alpha=None, sgd_mu=None,
                synthetic_n=args.synthetic_n, synthetic_d=args.synthetic_d,
                synthetic_nnz=args.synthetic_nnz, synthetic_skew=args.synthetic_skew,
                synthetic_sigma=args.synthetic_sigma, synthetic_noise=args.synthetic_noise,
                synthetic_seed=args.synthetic_seed,
            ))
            if config.data is None and config.synthetic is None:
                raise ValueError("ratios needs --data or synthetic parameters")
            print_ratios(load_dataset(config), config)
            return 0
        if args.command == "gen":
            spec = SyntheticSpec(n=args.n, d=args.d, nnz_per_example=args.nnz,
                                 norm_skew=args.skew, sigma=args.sigma,
                                 noise_rate=args.noise, seed=args.seed)
            write_libsvm(generate_synthetic(spec), args.out)
            print(f"wrote {args.n} examples to {args.out}")
            return 0
        if args.command == "check":
            return run_check(args.quick)
        if args.command == "bench":
            return run_bench(args.n, args.d, args.epochs, args.seed)
        if args.command == "bench-worker":
            report = _bench_workload(args.n, args.d, args.epochs, args.seed)
            print(json.dumps(report))
            return 0
        parser.error(f"unknown command {args.command}")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
