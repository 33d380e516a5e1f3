"""Command-line front end.

Every command reads an optional JSON config (``--config``) whose top-level
keys are command names; explicit flags override file values.  Frequencies in
config files and flags are ordinary frequencies in GHz and are converted to
rad/ps internally.  Artifacts embed the effective config and tool version, so
an artifact is itself a valid config file.

Exit codes: 0 ok, 1 failed check or error escalated by ``--strict``, 2 usage.
"""

from __future__ import annotations

import json
import math
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, Optional

import click
import numpy as np

from . import __version__, budget
from .detection import DetectorSpec, rng_for, sample
from .elements import StrictModeError, load_circuit
from .fock import as_fraction, run_heralded
from .functions import AnalyticShape
from .states import (OverlapWarning, envelope_for_temporal_width, make_frequency_basis,
                     make_time_basis, peak_for_spectral_fwhm, write_state_csv)

OUTPUT_ENV = "TFGKP_OUTPUT_DIR"
TOOL = {"name": "tfgkp", "version": __version__}


class CheckFailed(click.ClickException):
    exit_code = 1


def ghz_to_angular(f_ghz: float) -> float:
    """GHz (ordinary) to rad/ps."""
    return 2 * math.pi * f_ghz * 1e-3


def angular_to_ghz(w: float) -> float:
    return w * 1e3 / (2 * math.pi)


@dataclass
class RunConfig:
    """Effective parameters of one command."""

    command: str
    params: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {self.command: dict(sorted(self.params.items()))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, command: str, data: dict) -> "RunConfig":
        section = data.get("config", data).get(command, {})
        if not isinstance(section, dict):
            raise ValueError(f"config section {command!r} must be an object")
        return cls(command, dict(section))


def load_config_file(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("config must be a JSON object")
    return data


def effective(ctx: click.Context, command: str, params: dict) -> RunConfig:
    """Defaults, then the config file section, then explicit flags."""
    file_cfg = RunConfig.from_dict(command, ctx.obj["config"]).params
    unknown = set(file_cfg) - set(params)
    if unknown:
        raise click.UsageError(f"unknown {command} config keys: {sorted(unknown)}")
    out = {}
    for key, value in params.items():
        src = ctx.get_parameter_source(key)
        explicit = src is not None and src.name not in ("DEFAULT", "DEFAULT_MAP")
        out[key] = value if explicit or key not in file_cfg else file_cfg[key]
    return RunConfig(command, out)


def artifact(cfg: RunConfig, result) -> dict:
    return {"tool": TOOL, "config": cfg.to_dict(), "result": result}


def header_comment(cfg: RunConfig) -> str:
    return f"{TOOL['name']} {TOOL['version']}\nconfig: {json.dumps(cfg.to_dict(), sort_keys=True)}"


def out_path(ctx: click.Context, name: Optional[str]) -> Optional[Path]:
    if name is None:
        return None
    p = Path(name)
    if not p.is_absolute():
        p = Path(ctx.obj["out_dir"]) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def write_json(path: Optional[Path], data: dict) -> None:
    if path is not None:
        path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _fmt(x, unit: str = "") -> str:
    if x is None:
        return "unbounded"
    return f"{x:.6g}{(' ' + unit) if unit else ''}"


# ----------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="tfgkp")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="JSON config; top-level keys are command names.")
@click.option("--out-dir", default=None,
              help=f"Directory for relative output paths (default ${OUTPUT_ENV} or the cwd).")
@click.option("--strict", is_flag=True, help="Escalate overlap warnings to errors.")
@click.pass_context
def main(ctx, config_path, out_dir, strict):
    """Error budgets, detector sampling and circuit checks for time-frequency GKP qubits."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config_file(config_path)
    ctx.obj["out_dir"] = out_dir or os.environ.get(OUTPUT_ENV) or "."
    ctx.obj["strict"] = strict
    if strict:
        warnings.simplefilter("error", OverlapWarning)


def _guard(fn):
    """Map library errors onto exit codes."""
    try:
        return fn()
    except OverlapWarning as exc:
        raise CheckFailed(f"overlap (strict): {exc}")
    except StrictModeError as exc:
        raise CheckFailed(f"strict mode: {exc}")


@main.command()
@click.option("--error-rate", type=float, default=0.01, show_default=True)
@click.option("--convention", type=click.Choice(budget.ERF_CONVENTIONS), default=budget.DEFAULT_CONVENTION,
              show_default=True)
@click.option("--output", default=None, help="Write the report as JSON.")
@click.pass_context
def thresholds(ctx, error_rate, convention, output):
    """Ratio bounds keeping each error below the target rate."""
    cfg = effective(ctx, "thresholds", dict(error_rate=error_rate, convention=convention, output=output))
    p = cfg.params
    if not 0 < p["error_rate"] < 1:
        raise click.BadParameter("must lie in (0, 1)", param_hint="--error-rate")
    if p["convention"] not in budget.ERF_CONVENTIONS:
        raise click.BadParameter(f"one of {budget.ERF_CONVENTIONS}", param_hint="--convention")
    rep = budget.thresholds(p["error_rate"], convention=p["convention"])
    click.echo(f"error rate e = {p['error_rate']}   A = {rep.A:.6g}   erf convention: {p['convention']}")
    click.echo(f"{'constant':<20}{'computed':>12}{'published':>12}{'deviation':>12}")
    for key, row in rep.published_comparison().items():
        click.echo(f"{key:<20}{row['computed']:>12.6g}{row['published']:>12.6g}"
                   f"{100 * row['relative_deviation']:>11.2f}%")
    write_json(out_path(ctx, p["output"]), artifact(cfg, rep.to_dict()))


@main.command()
@click.option("--jitter-fwhm-ps", type=float, default=4.3, show_default=True)
@click.option("--error-rate", type=float, default=0.01, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--convention", type=click.Choice(budget.ERF_CONVENTIONS), default=budget.DEFAULT_CONVENTION,
              show_default=True)
@click.option("--output", default=None, help="Write the report as JSON.")
@click.pass_context
def requirements(ctx, jitter_fwhm_ps, error_rate, dim, convention, output):
    """Source and filter requirements implied by a detector jitter."""
    cfg = effective(ctx, "requirements", dict(jitter_fwhm_ps=jitter_fwhm_ps, error_rate=error_rate,
                                              dim=dim, convention=convention, output=output))
    p = cfg.params
    if p["jitter_fwhm_ps"] < 0:
        raise click.BadParameter("must be nonnegative", param_hint="--jitter-fwhm-ps")
    if p["dim"] < 1:
        raise click.BadParameter("must be >= 1", param_hint="--dim")
    if not 0 < p["error_rate"] < 1:
        raise click.BadParameter("must lie in (0, 1)", param_hint="--error-rate")
    hw = budget.hardware_requirements(p["jitter_fwhm_ps"], p["error_rate"], p["dim"], p["convention"])
    rows = [
        ("min temporal peak FWHM", _fmt(hw.dt_c_min_ps, "ps")),
        ("min time-bin width", _fmt(hw.time_bin_min_ps, "ps")),
        ("max repetition f_r", _fmt(hw.f_r_max_ghz, "GHz")),
        ("max spectral peak FWHM", _fmt(hw.df_c_max_ghz, "GHz")),
        ("finesse f_r/df_c", _fmt(hw.finesse)),
        ("envelope FWHM", _fmt(hw.envelope_fwhm_ghz, "GHz")),
        ("frequency bins in envelope", _fmt(hw.frequency_bins_in_envelope)),
    ]
    for name, val in rows:
        click.echo(f"{name:<30}{val}")
    write_json(out_path(ctx, p["output"]), artifact(cfg, asdict(hw)))


def _spec_from(p: dict) -> budget.BroadeningSpec:
    return budget.BroadeningSpec(dt_i=p["dt_i_ps"], dt_c=p["dt_c_ps"], df_c=ghz_to_angular(p["df_c_ghz"]),
                                 d=p["dim"], omega_r=ghz_to_angular(p["f_r_ghz"]))


SWEEP_PARAMS = {"dt_i": "dt_i_ps", "dt_c": "dt_c_ps", "df_c": "df_c_ghz"}


@main.command()
@click.option("--param", type=click.Choice(sorted(SWEEP_PARAMS)), default="df_c", show_default=True)
@click.option("--start", type=float, default=0.05, show_default=True)
@click.option("--stop", type=float, default=0.5, show_default=True)
@click.option("--num", type=int, default=10, show_default=True)
@click.option("--dt-i-ps", type=float, default=4.3, show_default=True)
@click.option("--dt-c-ps", type=float, default=21.5, show_default=True)
@click.option("--df-c-ghz", type=float, default=0.17, show_default=True)
@click.option("--f-r-ghz", type=float, default=21.0, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--convention", type=click.Choice(budget.ERF_CONVENTIONS), default=budget.DEFAULT_CONVENTION,
              show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--output", default="sweep.csv", show_default=True)
@click.pass_context
def sweep(ctx, param, start, stop, num, dt_i_ps, dt_c_ps, df_c_ghz, f_r_ghz, dim, convention, workers, output):
    """Closed forms and quadratures of the three error terms over a parameter range."""
    cfg = effective(ctx, "sweep", dict(param=param, start=start, stop=stop, num=num, dt_i_ps=dt_i_ps,
                                       dt_c_ps=dt_c_ps, df_c_ghz=df_c_ghz, f_r_ghz=f_r_ghz, dim=dim,
                                       convention=convention, workers=workers, output=output))
    p = cfg.params
    if p["num"] < 1:
        raise click.BadParameter("must be >= 1", param_hint="--num")
    key = SWEEP_PARAMS[p["param"]]
    specs = []
    try:
        for v in np.linspace(p["start"], p["stop"], p["num"]):
            specs.append(_spec_from(dict(p, **{key: float(v)})))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = budget.sweep(specs, p["convention"], workers=p["workers"])
    path = out_path(ctx, p["output"])
    budget.write_sweep_csv(path, specs, rows, header_comment=header_comment(cfg))
    click.echo(f"wrote {len(rows)} rows to {path}")


def _resolve_circuit(name: str):
    p = Path(name)
    if p.exists():
        return load_circuit(p)
    builtin = resources.files("tfgkp") / "circuits" / f"{name}.json"
    if builtin.is_file():
        return load_circuit(builtin)
    raise click.UsageError(f"no circuit file or builtin circuit named {name!r}")


def _check_expected(circuit, result) -> list:
    """Mismatches between the run and the circuit's ``expected`` block."""
    exp = circuit.expected
    bad = []
    got = {"success_prob": result.success_prob, "feed_forward_fraction": result.feed_forward_fraction,
           "fidelity": result.min_fidelity}
    for key, want in exp.items():
        have = got.get(key)
        if have is None:
            continue
        if result.exact:
            ok = as_fraction(have) == Fraction(want)
        else:
            ok = abs(float(have) - float(Fraction(want))) < 1e-9
        if not ok:
            bad.append(f"{key}: expected {want}, got {have}")
    return bad


@main.command()
@click.option("--circuit", "circuit_name", required=True, help="Circuit JSON file or builtin name.")
@click.option("--exact/--float", "exact", default=True, show_default=True)
@click.option("--visibility", default="1", show_default=True, help="Two-photon visibility V (rational or float).")
@click.option("--shots", type=int, default=0, show_default=True, help="Sample this many outcomes.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=None, help="JSON branch table.")
@click.option("--shots-output", default=None, help="CSV of sampled outcomes.")
@click.pass_context
def simulate(ctx, circuit_name, exact, visibility, shots, seed, output, shots_output):
    """Run a heralded circuit and compare against its expected values."""
    cfg = effective(ctx, "simulate", dict(circuit_name=circuit_name, exact=exact, visibility=visibility,
                                          shots=shots, seed=seed, output=output, shots_output=shots_output))
    p = cfg.params
    circuit = _resolve_circuit(p["circuit_name"])
    try:
        v = Fraction(str(p["visibility"])) if p["exact"] else float(Fraction(str(p["visibility"])))
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter("not a number", param_hint="--visibility")
    if not 0 <= v <= 1:
        raise click.BadParameter("must lie in [0, 1]", param_hint="--visibility")
    res = _guard(lambda: run_heralded(circuit, exact=p["exact"], visibility=v))
    click.echo(res.table())
    mode = "exact" if p["exact"] else "float"
    click.echo(f"success_prob = {res.success_prob} ({mode})")
    if circuit.feed_forward:
        click.echo(f"feed_forward_fraction = {res.feed_forward_fraction} ({mode})")
    if res.min_fidelity is not None:
        click.echo(f"min_success_fidelity = {res.min_fidelity} ({mode})")
    write_json(out_path(ctx, p["output"]), artifact(cfg, res.to_dict()))
    if p["shots"] > 0:
        probs = np.array([float(as_fraction(b.probability)) if p["exact"] else float(b.probability)
                          for b in res.branches])
        idx = rng_for(p["seed"]).choice(len(probs), size=p["shots"], p=probs / probs.sum())
        path = out_path(ctx, p["shots_output"] or "shots.csv")
        with open(path, "w", newline="") as fh:
            for line in header_comment(cfg).splitlines():
                fh.write(f"# {line}\n")
            fh.write("shot,outcome,success,feed_forward\n")
            for i, k in enumerate(idx):
                b = res.branches[k]
                outcome = json.dumps(b.outcome, sort_keys=True).replace('"', "'")
                fh.write(f'{i},"{outcome}",{int(b.success)},{int(b.feed_forward)}\n')
        succ = sum(res.branches[k].success for k in idx)
        click.echo(f"sampled {p['shots']} shots: {succ} heralded successes -> {path}")
    bad = _check_expected(circuit, res)
    if bad:
        raise CheckFailed("expected values not reproduced: " + "; ".join(bad))


def _state_from(p: dict, j: Optional[int] = None, basis: Optional[str] = None):
    wr = ghz_to_angular(p["f_r_ghz"])
    peak = peak_for_spectral_fwhm(ghz_to_angular(p["peak_fwhm_ghz"])) if p["peak_fwhm_ghz"] > 0 \
        else AnalyticShape.dirac()
    env = envelope_for_temporal_width(p["time_fwhm_ps"] / budget.FWHM_PER_SIGMA)
    make = make_time_basis if (basis or p["basis"]) == "time" else make_frequency_basis
    return make(p["j"] if j is None else j, p["dim"], wr, 0.0, peak, env)


def _state_options(fn):
    for opt in reversed([
        click.option("--basis", type=click.Choice(["frequency", "time"]), default="time", show_default=True),
        click.option("--j", type=int, default=0, show_default=True),
        click.option("--dim", type=int, default=2, show_default=True),
        click.option("--f-r-ghz", type=float, default=10.0, show_default=True),
        click.option("--peak-fwhm-ghz", type=float, default=0.16, show_default=True,
                     help="Spectral peak (Lorentzian) FWHM; 0 for dirac peaks."),
        click.option("--time-fwhm-ps", type=float, default=20.0, show_default=True,
                     help="Temporal peak FWHM (Gaussian spectral envelope)."),
    ]):
        fn = opt(fn)
    return fn


def _check_state_params(p: dict) -> None:
    if p["dim"] < 1 or not 0 <= p["j"] < p["dim"]:
        raise click.BadParameter("need dim >= 1 and 0 <= j < dim", param_hint="--j/--dim")
    if p["f_r_ghz"] <= 0 or p["time_fwhm_ps"] <= 0 or p["peak_fwhm_ghz"] < 0:
        raise click.UsageError("widths and repetition rate must be positive")


@main.command()
@_state_options
@click.option("--dump", "dump_dir", default="state", show_default=True, help="Directory for density CSVs.")
@click.pass_context
def state(ctx, basis, j, dim, f_r_ghz, peak_fwhm_ghz, time_fwhm_ps, dump_dir):
    """Write spectral and temporal amplitude/density CSVs of one basis state."""
    cfg = effective(ctx, "state", dict(basis=basis, j=j, dim=dim, f_r_ghz=f_r_ghz, peak_fwhm_ghz=peak_fwhm_ghz,
                                       time_fwhm_ps=time_fwhm_ps, dump_dir=dump_dir))
    p = cfg.params
    _check_state_params(p)
    st = _guard(lambda: _state_from(p))
    folder = out_path(ctx, p["dump_dir"])
    folder.mkdir(parents=True, exist_ok=True)
    write_state_csv(st, folder / "frequency.csv", "frequency")
    write_state_csv(st, folder / "time.csv", "time")
    write_json(folder / "state.json", artifact(cfg, json.loads(st.to_json())))
    click.echo(f"wrote frequency.csv, time.csv and state.json to {folder}")


@main.command()
@_state_options
@click.option("--kind", type=click.Choice(["time_resolving", "frequency_resolving", "oi_bank"]),
              default="time_resolving", show_default=True)
@click.option("--jitter-fwhm-ps", type=float, default=4.3, show_default=True)
@click.option("--shots", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--output", default="shots.csv", show_default=True)
@click.pass_context
def detect(ctx, basis, j, dim, f_r_ghz, peak_fwhm_ghz, time_fwhm_ps, kind, jitter_fwhm_ps, shots, seed,
           workers, output):
    """Sample detections of a basis state and write the shot records."""
    cfg = effective(ctx, "detect", dict(basis=basis, j=j, dim=dim, f_r_ghz=f_r_ghz, peak_fwhm_ghz=peak_fwhm_ghz,
                                        time_fwhm_ps=time_fwhm_ps, kind=kind, jitter_fwhm_ps=jitter_fwhm_ps,
                                        shots=shots, seed=seed, workers=workers, output=output))
    p = cfg.params
    _check_state_params(p)
    if p["shots"] < 1:
        raise click.BadParameter("must be >= 1", param_hint="--shots")
    if p["jitter_fwhm_ps"] < 0:
        raise click.BadParameter("must be nonnegative", param_hint="--jitter-fwhm-ps")
    st = _guard(lambda: _state_from(p))
    spec = DetectorSpec(p["kind"], jitter_fwhm=p["jitter_fwhm_ps"])
    rec = _guard(lambda: sample(st, spec, p["shots"], p["seed"], workers=p["workers"]))
    path = out_path(ctx, p["output"])
    rec.write_csv(path, header_comment=header_comment(cfg))
    hist = rec.histogram()
    click.echo("decoded bins: " + " ".join(f"{k}:{c}" for k, c in enumerate(hist)))
    click.echo(f"wrote {len(rec)} shots to {path}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
