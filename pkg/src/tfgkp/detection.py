"""Time- and frequency-resolving detector models.

Raw values are arrival times in ps (absolute, including the state's ``tau_0``)
or baseband detunings ``nu = omega - omega_0`` in rad/ps.  Decoding folds the
raw value by the period (``tau_r`` or ``omega_r``) and snaps to the nearest of
the ``d`` bin centers; a value exactly halfway goes to the lower bin.

Two sampling models are available:

``peaks``
    The state is treated as a comb of separated peaks: a comb line is drawn
    from the envelope weights and an offset from the peak profile.  Exact
    for basis states measured in their own domain when peaks do not overlap.
``density``
    Inverse-CDF sampling of the state's grid density.  Works for any state,
    including superpositions and cross-basis measurements.

``auto`` picks ``peaks`` when it applies.  Randomness comes from
``numpy.random.Philox`` streams derived from an explicit seed, split into
fixed-size chunks so results do not depend on the worker count.
"""

from __future__ import annotations

import csv
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .budget import BroadeningSpec
from .elements import InterleaverSpec, interleaver
from .functions import AnalyticShape
from .states import (OverlapWarning, TFGKPState, envelope_for_temporal_width,
                     peak_for_spectral_fwhm)

KINDS = ("time_resolving", "frequency_resolving", "oi_bank")
MODELS = ("auto", "peaks", "density")
FWHM_PER_SIGMA = 2 * math.sqrt(2 * math.log(2))
CHUNK = 1 << 14
SHOT_COLUMNS = ("shot", "port", "raw_value", "fold_index", "decoded_bin")


@dataclass(frozen=True)
class DetectorSpec:
    """Detector configuration.

    ``jitter_fwhm`` (ps) is the FWHM of the Gaussian timing jitter of a
    time-resolving detector.  ``resolution`` is the spectral response of a
    frequency-resolving detector (``None`` means ideal).  An ``oi_bank`` is an
    interleaver followed by one bucket detector per output port.  ``origin``
    overrides the decoding reference (``tau_0`` or 0 by default).
    """

    kind: str = "time_resolving"
    jitter_fwhm: float = 0.0
    resolution: Optional[AnalyticShape] = None
    interleaver: Optional[InterleaverSpec] = None
    model: str = "auto"
    origin: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"detector kind must be one of {KINDS}")
        if self.model not in MODELS:
            raise ValueError(f"sampling model must be one of {MODELS}")
        if not self.jitter_fwhm >= 0:
            raise ValueError("jitter_fwhm must be >= 0")
        if self.resolution is not None and self.resolution.kind not in ("gaussian", "dirac"):
            raise ValueError("resolution must be a gaussian PDF or a dirac")

    @property
    def jitter_sigma(self) -> float:
        return self.jitter_fwhm / FWHM_PER_SIGMA

    def jitter_pdf(self, t) -> np.ndarray:
        """Gaussian jitter density; a point mass is reported as zeros off 0."""
        t = np.asarray(t, dtype=float)
        s = self.jitter_sigma
        if s == 0:
            return np.where(t == 0, np.inf, 0.0)
        return np.exp(-t * t / (2 * s * s)) / (math.sqrt(2 * math.pi) * s)


@dataclass(frozen=True)
class DetectionRecord:
    raw_value: float
    decoded_bin: int
    port: int
    fold_index: int


def decode(raw, period: float, d: int, origin: float = 0.0):
    """Nearest-bin decoding, returning ``(decoded_bin, fold_index)`` arrays."""
    x = (np.asarray(raw, dtype=float) - origin) * (d / period)
    k = np.ceil(x - 0.5).astype(np.int64)
    return np.mod(k, d), np.floor_divide(k, d)


@dataclass
class ShotRecords:
    """A batch of detections in array form."""

    raw_value: np.ndarray
    decoded_bin: np.ndarray
    port: np.ndarray
    fold_index: np.ndarray
    d: int
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.raw_value)

    def record(self, i: int) -> DetectionRecord:
        return DetectionRecord(float(self.raw_value[i]), int(self.decoded_bin[i]),
                               int(self.port[i]), int(self.fold_index[i]))

    def histogram(self) -> np.ndarray:
        return np.bincount(self.decoded_bin, minlength=self.d)

    def error_rate(self, expected_bin: int) -> float:
        return float(np.mean(self.decoded_bin != expected_bin))

    def write_csv(self, path, header_comment: Optional[str] = None) -> None:
        with open(path, "w", newline="") as fh:
            if header_comment:
                for line in header_comment.splitlines():
                    fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(SHOT_COLUMNS)
            for i in range(len(self)):
                w.writerow([i, int(self.port[i]), repr(float(self.raw_value[i])),
                            int(self.fold_index[i]), int(self.decoded_bin[i])])


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


# ----------------------------------------------------------------------------
# peak-profile samplers

def _sample_shape_intensity(shape: AnalyticShape, rng, n: int) -> np.ndarray:
    """Offsets distributed as ``|shape(x)|^2``."""
    if shape.kind == "dirac":
        return np.zeros(n)
    if shape.kind == "lorentzian_amplitude":
        return shape.width * rng.standard_cauchy(n)
    if shape.kind == "gaussian":
        return rng.normal(0.0, shape.width / math.sqrt(2), n)
    raise NotImplementedError(f"no direct sampler for {shape.kind}")


def _sample_fourier_intensity(shape: AnalyticShape, rng, n: int) -> np.ndarray:
    """Offsets distributed as ``|fourier(shape)(t)|^2``."""
    if shape.kind == "gaussian":
        return rng.normal(0.0, 1.0 / (math.sqrt(2) * shape.width), n)
    raise NotImplementedError(f"no direct sampler for the transform of {shape.kind}")


def _comb_weights(weight_fn, first: float, period: float, half_span: float):
    """Line positions ``first + m period`` within ``half_span`` and their weights."""
    m = np.arange(math.floor(-half_span / period) - 1, math.ceil(half_span / period) + 2)
    pos = first + m * period
    w = np.abs(np.asarray(weight_fn(pos), dtype=complex)) ** 2
    keep = w > 0
    pos, w = pos[keep], w[keep]
    if not len(w):
        raise ValueError("comb has no weight")
    return pos, w / w.sum()


def _peaks_applicable(state: TFGKPState, domain: str) -> bool:
    if state.dispersion.k2L or state.basis != domain:
        return False
    if domain == "frequency":
        return state.peak.kind in ("dirac", "gaussian", "lorentzian_amplitude") and \
            state.envelope.kind in ("gaussian", "rect")
    return state.envelope.kind == "gaussian" and state.peak.kind in ("gaussian", "lorentzian_amplitude")


def _sample_peaks(state: TFGKPState, domain: str, rng, n: int) -> np.ndarray:
    if domain == "frequency":
        first = state.j * state.omega_r / state.d
        env = state.envelope
        span = env.extent() if env.kind == "gaussian" else env.width
        span = max(span, state.omega_r)
        pos, w = _comb_weights(lambda nu: env(-nu), first, state.omega_r, span)
        return rng.choice(pos, size=n, p=w) + _sample_shape_intensity(state.peak, rng, n)
    # time-domain comb: weights from the transform of the spectral peak
    period = state.tau_r
    first = state.tau_0 + state.j * period / state.d
    peak = state.peak
    span = 60.0 / peak.width if peak.kind == "lorentzian_amplitude" else 12.0 / peak.width
    span = max(span, 2 * period)
    pos, w = _comb_weights(lambda t: peak.fourier(state.tau_0 - t), first, period, span)
    return rng.choice(pos, size=n, p=w) + _sample_fourier_intensity(state.envelope, rng, n)


def _sample_density(state: TFGKPState, domain: str, rng, n: int) -> np.ndarray:
    f = state.spectral_density() if domain == "frequency" else state.temporal_density()
    p = np.clip(f.samples.real, 0.0, None)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    idx = np.minimum(idx, len(p) - 1)
    return f.origin + f.step * (idx + rng.random(n) - 0.5)


def _model(spec: DetectorSpec, state: TFGKPState, domain: str) -> str:
    if spec.model == "auto":
        return "peaks" if _peaks_applicable(state, domain) else "density"
    if spec.model == "peaks" and not _peaks_applicable(state, domain):
        raise ValueError(f"the peaks model does not apply to a {state.basis}-basis state "
                         f"measured in the {domain} domain")
    return spec.model


def _arrivals(state, spec, domain, rng, n):
    model = _model(spec, state, domain)
    if model == "peaks":
        return _sample_peaks(state, domain, rng, n)
    return _sample_density(state, domain, rng, n)


# ----------------------------------------------------------------------------
# overlap diagnostics

def _check_overlap(state: TFGKPState, spec: DetectorSpec, domain: str) -> None:
    if domain == "time":
        env = state.envelope
        if env.kind != "gaussian":
            return
        sigma = math.hypot(1.0 / (math.sqrt(2) * env.width), spec.jitter_sigma)
        fwhm, limit = FWHM_PER_SIGMA * sigma, 0.5 * state.tau_r / state.d
    else:
        fwhm = state.peak.intensity_fwhm()
        if spec.resolution is not None and spec.resolution.kind == "gaussian":
            fwhm = math.hypot(fwhm, FWHM_PER_SIGMA * spec.resolution.width)
        limit = 0.5 * state.omega_r / state.d
    if fwhm > limit:
        warnings.warn(f"{domain} peaks (FWHM {fwhm:.4g}) exceed half the bin spacing "
                      f"{limit:.4g}; decoding still snaps to the nearest bin",
                      OverlapWarning, stacklevel=3)


# ----------------------------------------------------------------------------
# detection

def _chunk_sizes(n: int) -> List[int]:
    return [min(CHUNK, n - s) for s in range(0, n, CHUNK)]


def _run_chunks(fn, n_shots: int, seed: int, workers: int):
    sizes = _chunk_sizes(n_shots)
    jobs = [(rng_for(seed, i), m) for i, m in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda job: fn(*job), jobs))
    else:
        parts = [fn(*job) for job in jobs]
    return [np.concatenate(x) for x in zip(*parts)]


def _time_chunk(state, spec):
    def run(rng, n):
        tau = _arrivals(state, spec, "time", rng, n)
        if spec.jitter_sigma > 0:
            tau = tau + rng.normal(0.0, spec.jitter_sigma, n)
        origin = state.tau_0 if spec.origin is None else spec.origin
        b, fold = decode(tau, state.tau_r, state.d, origin)
        return tau, b, np.zeros(n, dtype=np.int64), fold
    return run


def _frequency_chunk(state, spec):
    def run(rng, n):
        nu = _arrivals(state, spec, "frequency", rng, n)
        if spec.resolution is not None:
            nu = nu + rng.normal(0.0, spec.resolution.width, n) if spec.resolution.kind == "gaussian" else nu
        origin = 0.0 if spec.origin is None else spec.origin
        b, fold = decode(nu, state.omega_r, state.d, origin)
        return nu, b, np.zeros(n, dtype=np.int64), fold
    return run


def _oi_chunk(state, spec):
    ispec = spec.interleaver or InterleaverSpec(d=state.d, omega_r=state.omega_r, omega_0=state.omega_0)
    if ispec.d != state.d:
        raise ValueError("interleaver and state dimensions differ")
    imap = interleaver(ispec, strict=False)

    def run(rng, n):
        nu = np.empty(n)
        ports = np.empty(n, dtype=np.int64)
        filled = 0
        # photons lost in the filter are redrawn: the record is conditional on a click
        while filled < n:
            m = n - filled
            x = _arrivals(state, spec, "frequency", rng, m)
            probs = np.abs(imap.matrix(x)[:, :, 0]) ** 2
            cum = np.cumsum(probs, axis=1)
            total = cum[:, -1]
            clicked = rng.random(m) < total
            port = np.argmax(cum >= (rng.random(m) * total)[:, None], axis=1)
            k = int(clicked.sum())
            nu[filled:filled + k] = x[clicked]
            ports[filled:filled + k] = port[clicked]
            filled += k
        origin = 0.0 if spec.origin is None else spec.origin
        _, fold = decode(nu, state.omega_r, state.d, origin)
        return nu, ports.copy(), ports, fold
    return run


def sample(state: TFGKPState, spec: DetectorSpec, n_shots: int, seed: int,
           workers: int = 1) -> ShotRecords:
    """Draw ``n_shots`` detections; identical seeds give identical records."""
    if n_shots < 1:
        raise ValueError("n_shots must be >= 1")
    if spec.kind == "time_resolving":
        _check_overlap(state, spec, "time")
        fn = _time_chunk(state, spec)
    elif spec.kind == "frequency_resolving":
        _check_overlap(state, spec, "frequency")
        fn = _frequency_chunk(state, spec)
    else:
        _check_overlap(state, spec, "frequency")
        fn = _oi_chunk(state, spec)
    raw, b, port, fold = _run_chunks(fn, n_shots, seed, workers)
    return ShotRecords(raw, b, port, fold, state.d,
                       meta={"kind": spec.kind, "seed": seed, "n_shots": n_shots})


def detect_time(state: TFGKPState, spec: DetectorSpec, rng_seed: int) -> DetectionRecord:
    if spec.kind != "time_resolving":
        raise ValueError("detect_time needs a time_resolving detector")
    return sample(state, spec, 1, rng_seed).record(0)


def detect_frequency(state: TFGKPState, spec: DetectorSpec, rng_seed: int) -> DetectionRecord:
    if spec.kind not in ("frequency_resolving", "oi_bank"):
        raise ValueError("detect_frequency needs a frequency_resolving or oi_bank detector")
    return sample(state, spec, 1, rng_seed).record(0)


def measurement_statistics(state: TFGKPState, spec: DetectorSpec, n_shots: int,
                           rng_seed: int, workers: int = 1) -> np.ndarray:
    """Empirical distribution over decoded bins."""
    rec = sample(state, spec, n_shots, rng_seed, workers)
    return rec.histogram() / n_shots


def mc_sigma(p: float, n_shots: int) -> float:
    """Binomial standard error of an empirical rate."""
    return math.sqrt(max(p * (1 - p), 0.0) / n_shots)


def state_for_budget(spec: BroadeningSpec, basis: str = "frequency", j: int = 0,
                     tau_0: float = 0.0) -> TFGKPState:
    """Basis state whose line and pulse widths are those of ``spec``.

    Lines are Lorentzian with intensity FWHM ``df_c`` (Dirac when zero) and
    temporal peaks have intensity FWHM ``dt_c``.
    """
    if spec.dt_c <= 0:
        raise ValueError("a finite coherent pulse width is needed")
    peak = peak_for_spectral_fwhm(spec.df_c) if spec.df_c > 0 else AnalyticShape.dirac()
    return TFGKPState(d=spec.d, omega_r=spec.omega_r, peak=peak,
                      envelope=envelope_for_temporal_width(spec.sigma_tc),
                      basis=basis, j=j, tau_0=tau_0)
