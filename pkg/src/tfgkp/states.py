"""Physical TFGKP qudit states.

A state is stored by its construction parameters; amplitudes are evaluated on
demand on a baseband grid (detuning ``nu = omega - omega_0``).

Internally the state is described by the kernel ``xi`` of the creation
operator, ``(xi * a^dag)(omega_0)|0>``, which lives on the reflected axis
``s = omega_0 - omega``.  The spectral amplitude is ``A(nu) = xi(-nu)`` and the
temporal amplitude is the unitary Fourier transform of ``A``.  A propagation
delay ``tau_0`` multiplies ``xi`` by ``exp(-i s tau_0)`` and moves the
temporal wave packet to ``+tau_0``.

Basis conventions (``tau_r = 2 pi d / omega_r``):

* ``frequency(j)`` has spectral peaks at ``nu = (j/d) omega_r + n omega_r``;
* ``time(j) = d^(-1/2) sum_k exp(+2 pi i j k / d) frequency(k)`` has temporal
  peaks at ``tau_0 + (j/d) tau_r + n tau_r``.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .functions import (
    FREQUENCY,
    SQRT_2PI,
    TIME,
    AnalyticShape,
    CombFunction,
    GridFunction,
    fourier,
)

MAX_GRID_POINTS = 2**21

Grid = Tuple[float, float, int]  # origin, step, n


class OverlapWarning(UserWarning):
    """Peaks are too broad for the bins to be well separated."""


@dataclass(frozen=True)
class DispersionRecord:
    """Accumulated group-velocity dispersion.

    ``k2L`` is ``k'' * L`` in ps^2; the applied spectral phase is
    ``exp(-i k2L nu^2 / 2)``.  ``k1`` (ps per unit length) and ``length`` are
    bookkeeping only.
    """

    k2L: float = 0.0
    k1: Optional[float] = None
    length: Optional[float] = None

    @classmethod
    def from_medium(cls, k2: float, length: float, k1: Optional[float] = None) -> "DispersionRecord":
        return cls(k2L=k2 * length, k1=k1, length=length)

    @property
    def delay(self) -> Optional[float]:
        if self.k1 is None or self.length is None:
            return None
        return self.k1 * self.length

    def phase(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        return np.exp(-0.5j * self.k2L * nu**2)

    def broadening_scale(self) -> float:
        """Minimum achievable output FWHM, ``sqrt(8 ln2 |k''L|)``."""
        return math.sqrt(8 * math.log(2) * abs(self.k2L))

    def compose(self, other: "DispersionRecord") -> "DispersionRecord":
        length = None
        if self.length is not None and other.length is not None:
            length = self.length + other.length
        return DispersionRecord(self.k2L + other.k2L, None, length)


def envelope_for_temporal_width(sigma_tc: float) -> AnalyticShape:
    """Spectral envelope whose temporal peaks are ``(8 pi s^2)^(1/4) f_G,sqrt2 s``.

    ``|temporal peak|^2`` is then a Gaussian PDF of standard deviation
    ``sigma_tc``.
    """
    w = 1.0 / (math.sqrt(2.0) * sigma_tc)
    scale = (8 * math.pi * sigma_tc**2) ** 0.25 * w
    return AnalyticShape.gaussian(w, scale)


def temporal_peak_paf(sigma_tc: float):
    """The temporal PAF ``(8 pi s^2)^(1/4) f_G,sqrt(2) s`` as a callable."""
    s = math.sqrt(2.0) * sigma_tc
    norm = (8 * math.pi * sigma_tc**2) ** 0.25 / (SQRT_2PI * s)
    return lambda t: norm * np.exp(-np.asarray(t, dtype=float) ** 2 / (2 * s * s))


def peak_for_spectral_fwhm(fwhm: float) -> AnalyticShape:
    """Lorentzian amplitude peak with intensity FWHM ``fwhm`` (``gamma = fwhm/2``)."""
    return AnalyticShape.lorentzian(fwhm / 2.0)


@dataclass(frozen=True)
class TFGKPState:
    """Single-photon TFGKP qudit state.

    ``peak`` and ``envelope`` are the peak and envelope PAFs on the frequency
    axis; the envelope is named after the time domain because it sets the
    width of the temporal peaks.
    """

    d: int
    omega_r: float
    peak: AnalyticShape
    envelope: AnalyticShape
    basis: str = "frequency"
    j: int = 0
    omega_0: float = 0.0
    tau_0: float = 0.0
    dispersion: DispersionRecord = DispersionRecord()
    grid_points: Optional[int] = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not 0 <= self.j < self.d:
            raise ValueError(f"basis index j={self.j} outside [0, {self.d})")
        if self.basis not in ("frequency", "time"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if not self.omega_r > 0:
            raise ValueError("omega_r must be positive")
        if self.envelope.is_dirac or self.envelope.is_constant:
            raise ValueError("envelope must be normalizable")

    @property
    def tau_r(self) -> float:
        return 2 * math.pi * self.d / self.omega_r

    @property
    def carrier_phase(self) -> complex:
        return complex(np.exp(1j * self.omega_0 * self.tau_0))

    @property
    def bin_spacing(self) -> float:
        return self.omega_r / self.d

    # kernels -----------------------------------------------------------------
    def _comb(self, k: int) -> CombFunction:
        return CombFunction(period=self.omega_r, offset=-k * self.omega_r / self.d, peak=self.peak)

    def dft_coefficients(self) -> np.ndarray:
        """Coefficients of the frequency-basis states composing this state."""
        if self.basis == "frequency":
            c = np.zeros(self.d, dtype=complex)
            c[self.j] = 1.0
            return c
        k = np.arange(self.d)
        return np.exp(2j * np.pi * self.j * k / self.d) / math.sqrt(self.d)

    def kernel(self, s, mollify: Optional[float] = None) -> np.ndarray:
        """The creation-operator kernel ``xi(s)`` (unnormalized)."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        total = np.zeros(s.shape, dtype=complex)
        for k, c in enumerate(self.dft_coefficients()):
            if c != 0:
                total += c * self._comb(k)(s, mollify=mollify)
        total *= self.envelope(s)
        total *= np.exp(-1j * s * self.tau_0)
        if self.dispersion.k2L:
            total *= self.dispersion.phase(s)
        return total

    # grids -------------------------------------------------------------------
    def default_grid(self) -> Grid:
        """Baseband frequency grid resolving peaks, envelope and time extent."""
        env = self.envelope
        # twice the sampling extent keeps several time nodes per temporal peak
        half_span = 2 * env.extent()
        if math.isinf(half_span):
            raise ValueError("envelope has unbounded support; pass an explicit grid")
        half_span = max(half_span, self.omega_r)
        # time window half-width
        t_env = 12.0 / env.width if env.kind == "gaussian" else 4 * self.tau_r
        if self.dispersion.k2L:
            t_env += abs(self.dispersion.k2L) * half_span
        p = self.peak
        if p.kind == "lorentzian_amplitude":
            t_peak = 25.0 / p.width
            res = p.width / 4
        elif p.kind == "gaussian":
            t_peak = 9.0 / p.width
            res = p.width / 3
        else:
            t_peak = 4 * self.tau_r
            res = self.bin_spacing / 64
        t_half = max(t_peak, t_env) + abs(self.tau_0) + self.tau_r
        step = min(res, math.pi / t_half)
        if self.grid_points is not None:
            n = self.grid_points
        else:
            n = 1 << int(math.ceil(math.log2(2 * half_span / step)))
            if n > MAX_GRID_POINTS:
                warnings.warn(f"grid capped at {MAX_GRID_POINTS} points", stacklevel=2)
                n = MAX_GRID_POINTS
        step = min(step, 2 * half_span / n) if self.grid_points is None else 2 * half_span / n
        return (-step * (n // 2), step, n)

    def time_grid(self, grid: Optional[Grid] = None) -> Grid:
        origin, step, n = grid or self.default_grid()
        dt = 2 * math.pi / (n * step)
        return (-dt * (n // 2), dt, n)

    # amplitudes --------------------------------------------------------------
    def spectral_amplitude(self, grid: Optional[Grid] = None, normalize: bool = True) -> GridFunction:
        origin, step, n = grid or self.default_grid()
        nu = origin + step * np.arange(n)
        mollify = 3.0 * step if self.peak.is_dirac else None
        f = GridFunction(self.kernel(-nu, mollify=mollify), origin, step, FREQUENCY)
        return f.normalized() if normalize else f

    def temporal_amplitude(self, grid: Optional[Grid] = None) -> GridFunction:
        """Fourier transform of the (normalized) spectral amplitude."""
        return fourier(self.spectral_amplitude(grid))

    def temporal_amplitude_direct(self, grid: Optional[Grid] = None,
                                  tol: float = 1e-17) -> GridFunction:
        """Time-domain construction of a time-basis state without the DFT.

        ``psi(t) ~ G(tau_0 - t)`` with
        ``G = (T_{j tau_r/d}(C_{tau_r}) . hat(peak)) * hat(envelope)``,
        evaluated from closed-form transforms of the peak and envelope.
        """
        if self.basis != "time":
            raise ValueError("direct construction applies to time-basis states")
        if self.dispersion.k2L:
            raise NotImplementedError("direct construction without dispersion only")
        if self.peak.kind == "custom" or self.envelope.kind == "custom":
            raise NotImplementedError("closed-form transforms required")
        t0, dt, n = self.time_grid(grid)
        t = t0 + dt * np.arange(n)
        u = self.tau_0 - t
        lo, hi = u.min(), u.max()
        period = self.tau_r
        first = -self.j * period / self.d
        m_lo = math.floor((lo - first) / period) - 1
        m_hi = math.ceil((hi - first) / period) + 1
        out = np.zeros(n, dtype=complex)
        for m in range(m_lo, m_hi + 1):
            p = first + m * period
            w = self.peak.fourier(np.array([p]))[0]
            if abs(w) < tol:
                continue
            out += w * self.envelope.fourier(u - p)
        return GridFunction(out, t0, dt, TIME).normalized()

    def temporal_density(self, grid: Optional[Grid] = None) -> GridFunction:
        return self.temporal_amplitude(grid).abs2()

    def spectral_density(self, grid: Optional[Grid] = None) -> GridFunction:
        return self.spectral_amplitude(grid).abs2()

    def approx_normalization(self, n_terms: int = 10_000) -> float:
        """Approximate normalization ``sum_m |hat(peak)(m tau_r)|^2``."""
        m = np.arange(-n_terms, n_terms + 1)
        return float(np.sum(np.abs(self.peak.fourier(m * self.tau_r)) ** 2))

    # serialization -----------------------------------------------------------
    def to_dict(self) -> dict:
        def shape(s: AnalyticShape) -> dict:
            if s.kind == "custom":
                raise ValueError("custom shapes are not serializable")
            return {"kind": s.kind, "width": s.width,
                    "scale": [complex(s.scale).real, complex(s.scale).imag]}

        return {
            "d": self.d,
            "omega_r": self.omega_r,
            "omega_0": self.omega_0,
            "tau_0": self.tau_0,
            "basis": self.basis,
            "j": self.j,
            "peak": shape(self.peak),
            "envelope": shape(self.envelope),
            "dispersion": asdict(self.dispersion),
            "grid_points": self.grid_points,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TFGKPState":
        def shape(x: dict) -> AnalyticShape:
            re, im = x.get("scale", [1.0, 0.0])
            return AnalyticShape(x["kind"], float(x["width"]), complex(re, im))

        return cls(
            d=int(data["d"]),
            omega_r=float(data["omega_r"]),
            omega_0=float(data.get("omega_0", 0.0)),
            tau_0=float(data.get("tau_0", 0.0)),
            basis=data.get("basis", "frequency"),
            j=int(data.get("j", 0)),
            peak=shape(data["peak"]),
            envelope=shape(data["envelope"]),
            dispersion=DispersionRecord(**data.get("dispersion", {})),
            grid_points=data.get("grid_points"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TFGKPState":
        return cls.from_dict(json.loads(text))


def _check_peak_width(d: int, omega_r: float, peak: AnalyticShape) -> None:
    if peak.intensity_fwhm() > 0.5 * omega_r / d:
        warnings.warn(
            f"peak FWHM {peak.intensity_fwhm():.4g} exceeds half the bin spacing "
            f"{0.5 * omega_r / d:.4g}; bins overlap", OverlapWarning, stacklevel=3)


def make_frequency_basis(j: int, d: int, omega_r: float, omega_0: float,
                         peak: AnalyticShape, envelope: AnalyticShape, **kw) -> TFGKPState:
    """``|j_f>``: frequency comb of period ``omega_r`` offset by ``j omega_r / d``."""
    _check_peak_width(d, omega_r, peak)
    return TFGKPState(d=d, omega_r=omega_r, omega_0=omega_0, peak=peak,
                      envelope=envelope, basis="frequency", j=j, **kw)


def make_time_basis(j: int, d: int, omega_r: float, omega_0: float,
                    peak: AnalyticShape, envelope: AnalyticShape, **kw) -> TFGKPState:
    """``|j_t>``: temporal comb of period ``tau_r`` offset by ``j tau_r / d``."""
    _check_peak_width(d, omega_r, peak)
    return TFGKPState(d=d, omega_r=omega_r, omega_0=omega_0, peak=peak,
                      envelope=envelope, basis="time", j=j, **kw)


def propagate(state: TFGKPState, tau_add: float = 0.0,
              dispersion: Optional[DispersionRecord] = None) -> TFGKPState:
    """Delay by ``tau_add`` and optionally accumulate dispersion."""
    disp = state.dispersion if dispersion is None else state.dispersion.compose(dispersion)
    return replace(state, tau_0=state.tau_0 + tau_add, dispersion=disp)


def inner_product(a: TFGKPState, b: TFGKPState, grid: Optional[Grid] = None) -> complex:
    """``<a|b>`` evaluated on ``a``'s baseband grid."""
    origin, step, n = grid or a.default_grid()
    shift = b.omega_0 - a.omega_0
    span = step * n
    if abs(shift) > span / 2:
        raise ValueError(f"carrier mismatch {shift} exceeds grid half-span {span / 2}")
    fa = a.spectral_amplitude((origin, step, n))
    nb = b.spectral_amplitude((origin - shift, step, n))
    return complex(np.sum(np.conj(fa.samples) * nb.samples) * step)


def gram_matrix(states, grid: Optional[Grid] = None) -> np.ndarray:
    grid = grid or states[0].default_grid()
    amps = [s.spectral_amplitude(grid) for s in states]
    step = grid[1]
    m = np.array([[np.sum(np.conj(x.samples) * y.samples) * step for y in amps] for x in amps])
    return m


def write_state_csv(state: TFGKPState, path, domain: str = "frequency",
                    grid: Optional[Grid] = None) -> None:
    """CSV with columns ``axis, re, im, density``."""
    amp = state.spectral_amplitude(grid) if domain == "frequency" else state.temporal_amplitude(grid)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["axis", "re", "im", "density"])
        for x, v in zip(amp.axis_values, amp.samples):
            w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag)),
                        repr(float(abs(v) ** 2))])
