"""Functions of one real variable on the time or angular-frequency axis.

Three representations are used throughout the package:

* :class:`AnalyticShape` -- a closed-form peak or envelope localized at the
  origin (Gaussian PDF, Lorentzian amplitude, rectangle, Dirac delta, or a
  wrapped grid).
* :class:`GridFunction` -- complex samples on a uniform grid.
* :class:`CombFunction` -- ``envelope * (comb conv peak)``, modulated, with the
  comb kept exact so Dirac peaks never have to be sampled.

Operators follow ``T_w(f)(x) = f(x + w)`` and ``M_t(f)(x) = exp(-i x t) f(x)``.
The Fourier transform is unitary,
``fourier(f)(t) = (2 pi)^(-1/2) * integral f(x) exp(-i x t) dx``.
With this choice the transform of a Dirac comb of period ``P`` is a comb of
period ``2 pi / P`` with weight ``sqrt(2 pi) / P`` (see :func:`comb_fourier_weight`).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np

TIME = "time_ps"
FREQUENCY = "angular_frequency_rad_per_ps"
AXIS_KINDS = (TIME, FREQUENCY)

SQRT_2PI = math.sqrt(2.0 * math.pi)
DEFAULT_POINTS = 2**14
MOLLIFIER_STEPS = 3.0


def comb_fourier_weight(period: float) -> float:
    """Weight of the comb obtained by transforming a unit comb of ``period``."""
    return SQRT_2PI / period


def flip_axis(axis: str) -> str:
    return FREQUENCY if axis == TIME else TIME


class AxisMismatchError(ValueError):
    """Raised when combining functions living on different axes."""


# ----------------------------------------------------------------------------
# Analytic shapes
# ----------------------------------------------------------------------------

SHAPE_KINDS = ("gaussian", "lorentzian_amplitude", "rect", "dirac", "custom")


@dataclass(frozen=True)
class AnalyticShape:
    """Closed-form shape centered at the origin.

    ``gaussian`` is the normalized PDF ``f_G,sigma`` (``width`` = sigma),
    ``lorentzian_amplitude`` is ``sqrt(g/pi) / (g - i x)`` (``width`` = g),
    ``rect`` is 1 on ``|x| <= width`` and ``dirac`` is a unit delta.  The
    ``custom`` kind wraps a :class:`GridFunction` given as ``grid``.
    """

    kind: str
    width: float = 0.0
    scale: complex = 1.0
    grid: Optional["GridFunction"] = None

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.kind in ("gaussian", "lorentzian_amplitude", "rect") and not self.width > 0:
            raise ValueError(f"{self.kind} needs a positive width, got {self.width}")
        if self.kind == "custom" and self.grid is None:
            raise ValueError("custom shape needs a grid")

    # constructors -----------------------------------------------------------
    @classmethod
    def gaussian(cls, sigma: float, scale: complex = 1.0) -> "AnalyticShape":
        return cls("gaussian", float(sigma), scale)

    @classmethod
    def lorentzian(cls, gamma: float, scale: complex = 1.0) -> "AnalyticShape":
        return cls("lorentzian_amplitude", float(gamma), scale)

    @classmethod
    def rect(cls, halfwidth: float, scale: complex = 1.0) -> "AnalyticShape":
        return cls("rect", float(halfwidth), scale)

    @classmethod
    def dirac(cls, scale: complex = 1.0) -> "AnalyticShape":
        return cls("dirac", 0.0, scale)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "AnalyticShape":
        # A flat function is a rect too wide to ever matter.
        return cls("rect", float("inf"), value)

    @classmethod
    def custom(cls, grid: "GridFunction", scale: complex = 1.0) -> "AnalyticShape":
        return cls("custom", 0.0, scale, grid)

    @property
    def is_dirac(self) -> bool:
        return self.kind == "dirac"

    @property
    def is_constant(self) -> bool:
        return self.kind == "rect" and math.isinf(self.width)

    def scaled(self, factor: complex) -> "AnalyticShape":
        return replace(self, scale=self.scale * factor)

    def __call__(self, x, mollify: Optional[float] = None) -> np.ndarray:
        """Evaluate at ``x``.

        Dirac shapes cannot be sampled; pass ``mollify`` (a Gaussian width) to
        substitute a normalized narrow Gaussian.
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            s = self.width
            out = np.exp(-(x**2) / (2 * s * s)) / (SQRT_2PI * s)
        elif self.kind == "lorentzian_amplitude":
            g = self.width
            out = np.sqrt(g / np.pi) / (g - 1j * x)
        elif self.kind == "rect":
            out = (np.abs(x) <= self.width).astype(float)
        elif self.kind == "dirac":
            if mollify is None:
                raise ValueError("a Dirac delta cannot be evaluated pointwise; pass mollify")
            out = np.exp(-(x**2) / (2 * mollify**2)) / (SQRT_2PI * mollify)
        else:
            out = self.grid(x)
        return self.scale * np.asarray(out, dtype=complex)

    def fourier(self, t) -> np.ndarray:
        """Closed-form unitary Fourier transform evaluated at ``t``.

        The Lorentzian amplitude transforms into a one-sided exponential
        ``sqrt(2 g) exp(-g t)`` for ``t > 0``; at ``t = 0`` the symmetric-limit
        value (half of it) is returned.
        """
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            out = np.exp(-(self.width**2) * t**2 / 2) / SQRT_2PI
        elif self.kind == "lorentzian_amplitude":
            g = self.width
            step = np.where(t > 0, 1.0, np.where(t == 0, 0.5, 0.0))
            out = np.sqrt(2 * g) * np.exp(-g * np.where(t > 0, t, 0.0)) * step
        elif self.kind == "rect":
            if self.is_constant:
                raise ValueError("transform of a constant is a delta")
            h = self.width
            out = (2 * h / SQRT_2PI) * np.sinc(h * t / np.pi)
        elif self.kind == "dirac":
            out = np.full(t.shape, 1.0 / SQRT_2PI)
        else:
            return self.scale * self.grid.fourier_at(t)
        return self.scale * np.asarray(out, dtype=complex)

    def intensity_fwhm(self) -> float:
        """FWHM of ``|shape|**2``."""
        if self.kind == "gaussian":
            # |f_G,s|^2 is a Gaussian of std s / sqrt(2)
            return math.sqrt(8 * math.log(2)) * self.width / math.sqrt(2)
        if self.kind == "lorentzian_amplitude":
            return 2 * self.width
        if self.kind == "rect":
            return 2 * self.width
        if self.kind == "dirac":
            return 0.0
        return self.grid.intensity_fwhm()

    def extent(self) -> float:
        """Half-width beyond which the shape is negligible for sampling."""
        if self.kind == "gaussian":
            return 12.0 * self.width
        if self.kind == "rect":
            return self.width
        if self.kind == "lorentzian_amplitude":
            return float("inf")
        if self.kind == "dirac":
            return 0.0
        g = self.grid
        return max(abs(g.origin), abs(g.axis_values[-1]))

    def sample(self, origin: float, step: float, n: int, axis: str,
               mollify: Optional[float] = None) -> "GridFunction":
        x = origin + step * np.arange(n)
        if self.is_dirac and mollify is None:
            mollify = MOLLIFIER_STEPS * step
        return GridFunction(self(x, mollify=mollify), origin, step, axis)


# ----------------------------------------------------------------------------
# Grid functions
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples ``samples[n]`` at ``origin + n * step``."""

    samples: np.ndarray
    origin: float
    step: float
    axis: str = FREQUENCY

    def __post_init__(self):
        data = np.array(self.samples, dtype=complex)
        if data.ndim != 1 or data.size < 2:
            raise ValueError("a grid function needs at least two samples")
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if self.axis not in AXIS_KINDS:
            raise ValueError(f"unknown axis kind {self.axis!r}")
        data.setflags(write=False)
        object.__setattr__(self, "samples", data)
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))

    @classmethod
    def from_callable(cls, func: Callable, origin: float, step: float, n: int,
                      axis: str = FREQUENCY) -> "GridFunction":
        x = origin + step * np.arange(n)
        return cls(func(x), origin, step, axis)

    @classmethod
    def centered(cls, func: Callable, span: float, n: int = DEFAULT_POINTS,
                 axis: str = FREQUENCY, center: float = 0.0) -> "GridFunction":
        step = span / n
        return cls.from_callable(func, center - step * (n // 2), step, n, axis)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def axis_values(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.samples.size)

    def with_samples(self, samples) -> "GridFunction":
        return GridFunction(samples, self.origin, self.step, self.axis)

    def __mul__(self, factor: complex) -> "GridFunction":
        return self.with_samples(self.samples * factor)

    __rmul__ = __mul__

    def __add__(self, other: "GridFunction") -> "GridFunction":
        a, b = align(self, other)
        return a.with_samples(a.samples + b.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self + other * -1.0

    def conj(self) -> "GridFunction":
        return self.with_samples(np.conj(self.samples))

    def abs2(self) -> "GridFunction":
        return self.with_samples(np.abs(self.samples) ** 2)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.step))

    def integral(self) -> complex:
        return complex(np.sum(self.samples) * self.step)

    def normalized(self) -> "GridFunction":
        n = self.norm()
        if not n > 0 or not np.isfinite(n):
            raise ValueError("function is not normalizable")
        return self * (1.0 / n)

    def reflected(self) -> "GridFunction":
        """``x -> f(-x)``."""
        last = self.origin + self.step * (self.samples.size - 1)
        return GridFunction(self.samples[::-1], -last, self.step, self.axis)

    def fourier_at(self, t) -> np.ndarray:
        """Riemann-sum Fourier transform evaluated at arbitrary points."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = self.axis_values
        out = np.empty(t.shape, dtype=complex)
        chunk = max(1, 2**22 // x.size)
        for i in range(0, t.size, chunk):
            out[i:i + chunk] = np.exp(-1j * np.outer(t[i:i + chunk], x)) @ self.samples
        return out * self.step / SQRT_2PI

    def __call__(self, x) -> np.ndarray:
        """Band-limited (trigonometric) interpolation; exact at the nodes."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        spec = fourier(self)
        tau = spec.axis_values
        out = np.empty(x.shape, dtype=complex)
        chunk = max(1, 2**22 // tau.size)
        for i in range(0, x.size, chunk):
            out[i:i + chunk] = np.exp(1j * np.outer(x[i:i + chunk], tau)) @ spec.samples
        return out * spec.step / SQRT_2PI

    def intensity_fwhm(self) -> float:
        """FWHM of ``|f|**2`` around its global maximum."""
        return self.abs2().fwhm()

    def fwhm(self) -> float:
        """FWHM of ``|f|`` around its global maximum, linearly interpolated."""
        y = np.abs(self.samples)
        k = int(np.argmax(y))
        half = y[k] / 2
        left = k
        while left > 0 and y[left] > half:
            left -= 1
        right = k
        while right < y.size - 1 and y[right] > half:
            right += 1
        x = self.axis_values

        def cross(i, j):
            if y[i] == y[j]:
                return x[i]
            return x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i])

        return float(cross(right - 1, right) - cross(left, left + 1))

    def to_csv(self, path) -> None:
        write_csv(self, path)


def write_csv(f: GridFunction, path) -> None:
    """Debug dump with columns ``x, re, im``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for x, v in zip(f.axis_values, f.samples):
            w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])


def _offset_in_steps(a: GridFunction, b: GridFunction) -> Optional[int]:
    if not math.isclose(a.step, b.step, rel_tol=1e-12):
        return None
    k = (b.origin - a.origin) / a.step
    r = round(k)
    if abs(k - r) > 1e-6:
        return None
    return int(r)


def resample(f: GridFunction, origin: float, step: float, n: int) -> GridFunction:
    """Band-limited resampling of ``f`` onto a new uniform grid."""
    return GridFunction(f(origin + step * np.arange(n)), origin, step, f.axis)


def align(a: GridFunction, b: GridFunction):
    """Bring two grid functions onto one common grid (zero outside support).

    Grids sharing step and node lattice are merged without interpolation;
    otherwise both are resampled to the finer step.
    """
    if a.axis != b.axis:
        raise AxisMismatchError(f"{a.axis} vs {b.axis}")
    k = _offset_in_steps(a, b)
    if k is None:
        step = min(a.step, b.step)
        lo = min(a.origin, b.origin)
        hi = max(a.axis_values[-1], b.axis_values[-1])
        n = int(math.ceil((hi - lo) / step)) + 1
        return resample(a, lo, step, n), resample(b, lo, step, n)
    lo = min(0, k)
    hi = max(a.samples.size, k + b.samples.size)
    sa = np.zeros(hi - lo, dtype=complex)
    sb = np.zeros(hi - lo, dtype=complex)
    sa[-lo:-lo + a.samples.size] = a.samples
    sb[k - lo:k - lo + b.samples.size] = b.samples
    origin = a.origin + lo * a.step
    return GridFunction(sa, origin, a.step, a.axis), GridFunction(sb, origin, a.step, a.axis)


def l2_distance(a: GridFunction, b: GridFunction) -> float:
    x, y = align(a, b)
    return float(np.sqrt(np.sum(np.abs(x.samples - y.samples) ** 2) * x.step))


def relative_l2(a: GridFunction, b: GridFunction) -> float:
    scale = max(a.norm(), b.norm())
    return l2_distance(a, b) / scale if scale > 0 else 0.0


# ----------------------------------------------------------------------------
# Comb functions
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CombFunction:
    """``exp(-i x tau) * envelope(x) * sum_n w_n peak(x - offset - n*period)``.

    ``weights`` is a periodic pattern: peak ``n`` carries
    ``scale * weights[n mod len(weights)]``.  ``n_peaks`` restricts ``n`` to
    ``[-n_peaks, n_peaks]``; when ``None`` the range is chosen from the
    envelope (discarded envelope mass < ``1e-9``) or, for Lorentzian peaks
    without an envelope cutoff, summed in closed form over the whole lattice.
    """

    period: float
    offset: float = 0.0
    peak: AnalyticShape = field(default_factory=AnalyticShape.dirac)
    envelope: Optional[AnalyticShape] = None
    tau: float = 0.0
    scale: complex = 1.0
    weights: tuple = (1.0,)
    n_peaks: Optional[int] = None
    axis: str = FREQUENCY

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("comb period must be positive")
        if self.axis not in AXIS_KINDS:
            raise ValueError(f"unknown axis kind {self.axis!r}")
        object.__setattr__(self, "weights", tuple(complex(w) for w in self.weights))

    def peak_index_range(self, lo: float, hi: float):
        """Indices of peaks whose support can reach ``[lo, hi]``."""
        reach = self.peak.extent()
        if math.isinf(reach):
            reach = 0.0
        n_lo = math.floor((lo - reach - self.offset) / self.period)
        n_hi = math.ceil((hi + reach - self.offset) / self.period)
        n_env = self.envelope_truncation()
        if n_env is not None:
            n_lo, n_hi = max(n_lo, -n_env), min(n_hi, n_env)
        return n_lo, n_hi

    def envelope_truncation(self, tol: float = 1e-9) -> Optional[int]:
        if self.n_peaks is not None:
            return self.n_peaks
        env = self.envelope
        if env is None or env.is_constant or env.kind == "lorentzian_amplitude":
            return None
        if env.kind == "rect":
            return int(math.ceil((env.width + abs(self.offset)) / self.period))
        n_max = 8
        while True:
            n = np.arange(-n_max, n_max + 1)
            mass = np.abs(env(self.offset + n * self.period)) ** 2
            total = mass.sum()
            inner = np.abs(n) <= n_max // 2
            if total > 0 and mass[~inner].sum() < tol * total:
                break
            n_max *= 2
            if n_max > 2**22:
                raise ValueError("envelope too wide for comb truncation")
        for k in range(1, n_max + 1):
            if mass[np.abs(n) > k].sum() < tol * total:
                return k
        return n_max

    def centers(self, n: np.ndarray) -> np.ndarray:
        return self.offset + n * self.period

    def peak_weights(self, n: np.ndarray) -> np.ndarray:
        pattern = np.asarray(self.weights, dtype=complex)
        return self.scale * pattern[np.mod(n, pattern.size)]

    def _uses_lattice_sum(self) -> bool:
        return (self.peak.kind == "lorentzian_amplitude" and self.n_peaks is None
                and self.envelope_truncation() is None)

    def __call__(self, x, mollify: Optional[float] = None) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape, dtype=complex)
        if self._uses_lattice_sum():
            out = self._lattice_sum(x)
        else:
            n_lo, n_hi = self.peak_index_range(x.min(), x.max())
            if self.peak.is_dirac and mollify is None:
                raise ValueError("comb of Dirac peaks needs mollify to be sampled")
            for n in range(n_lo, n_hi + 1):
                c = self.offset + n * self.period
                w = self.peak_weights(np.array([n]))[0]
                if self.peak.is_dirac:
                    # exact delta semantics: smooth factors act at the center
                    factor = w * np.exp(-1j * c * self.tau)
                    if self.envelope is not None:
                        factor = factor * self.envelope(np.array([c]))[0]
                    out += factor * self.peak(x - c, mollify=mollify)
                else:
                    out += w * self.peak(x - c)
            if self.peak.is_dirac:
                return out
        if self.envelope is not None:
            out = out * self.envelope(x)
        return out * np.exp(-1j * x * self.tau)

    def _lattice_sum(self, x: np.ndarray) -> np.ndarray:
        # sum_n 1/(y - nP + ig) = (pi/P) cot(pi (y + ig) / P), symmetric summation
        g = self.peak.width
        pattern = np.asarray(self.weights, dtype=complex)
        big = self.period * pattern.size
        out = np.zeros(x.shape, dtype=complex)
        for r, w in enumerate(pattern):
            y = x - self.offset - r * self.period
            z = np.pi * (y + 1j * g) / big
            out += w * (np.pi / big) / np.tan(z)
        return self.scale * self.peak.scale * 1j * np.sqrt(g / np.pi) * out

    def sample(self, origin: float, step: float, n: int,
               mollify: Optional[float] = None) -> GridFunction:
        x = origin + step * np.arange(n)
        if self.peak.is_dirac and mollify is None:
            mollify = MOLLIFIER_STEPS * step
        return GridFunction(self(x, mollify=mollify), origin, step, self.axis)


TimeFrequencyFunction = Union[GridFunction, CombFunction]


def dirac_comb(period: float, offset: float = 0.0, axis: str = FREQUENCY,
               n_peaks: Optional[int] = None) -> CombFunction:
    """``C_period`` translated so that its peaks sit at ``offset + n * period``."""
    return CombFunction(period=period, offset=offset, axis=axis, n_peaks=n_peaks)


# ----------------------------------------------------------------------------
# Operators
# ----------------------------------------------------------------------------

def translate(f: TimeFrequencyFunction, omega: float) -> TimeFrequencyFunction:
    """``x -> f(x + omega)``."""
    if isinstance(f, GridFunction):
        return GridFunction(f.samples, f.origin - omega, f.step, f.axis)
    if isinstance(f, CombFunction):
        if f.envelope is not None and not f.envelope.is_constant:
            raise NotImplementedError("translating an enveloped comb; sample it first")
        return replace(f, offset=f.offset - omega, scale=f.scale * np.exp(-1j * omega * f.tau))
    raise TypeError(f"cannot translate {type(f).__name__}")


def modulate(f: TimeFrequencyFunction, tau: float) -> TimeFrequencyFunction:
    """``x -> exp(-i x tau) f(x)``."""
    if isinstance(f, GridFunction):
        return f.with_samples(f.samples * np.exp(-1j * f.axis_values * tau))
    if isinstance(f, CombFunction):
        return replace(f, tau=f.tau + tau)
    raise TypeError(f"cannot modulate {type(f).__name__}")


def pointwise_mul(f, g) -> TimeFrequencyFunction:
    """Pointwise product ``f(x) g(x)``."""
    if isinstance(g, (int, float, complex)):
        return f * g if isinstance(f, GridFunction) else replace(f, scale=f.scale * g)
    if isinstance(f, AnalyticShape) and not isinstance(g, AnalyticShape):
        f, g = g, f
    if isinstance(f, CombFunction) and isinstance(g, AnalyticShape):
        if f.envelope is None or f.envelope.is_constant:
            return replace(f, envelope=g.scaled(f.envelope.scale) if f.envelope else g)
        raise NotImplementedError("comb already carries an envelope")
    if isinstance(f, GridFunction) and isinstance(g, AnalyticShape):
        return f.with_samples(f.samples * g(f.axis_values))
    if isinstance(f, GridFunction) and isinstance(g, CombFunction):
        f, g = g, f
    if isinstance(f, CombFunction) and isinstance(g, GridFunction):
        _check_axes(f, g)
        return g.with_samples(g.samples * f.sample(g.origin, g.step, len(g)).samples)
    if isinstance(f, GridFunction) and isinstance(g, GridFunction):
        a, b = align(f, g)
        return a.with_samples(a.samples * b.samples)
    raise TypeError(f"cannot multiply {type(f).__name__} and {type(g).__name__}")


def _check_axes(f, g):
    fa = getattr(f, "axis", None)
    ga = getattr(g, "axis", None)
    if fa is not None and ga is not None and fa != ga:
        raise AxisMismatchError(f"{fa} vs {ga}")


def convolve(f, g) -> TimeFrequencyFunction:
    """Convolution ``(f * g)(x) = integral f(y) g(x - y) dy``.

    Grid inputs are convolved by zero-padded FFT; the output grid origin is
    the sum of the input origins.  A Dirac comb convolved with a smooth peak
    stays in comb form.
    """
    if isinstance(f, AnalyticShape) and not isinstance(g, AnalyticShape):
        f, g = g, f
    _check_axes(f, g)
    if isinstance(f, CombFunction) and isinstance(g, AnalyticShape):
        if not f.peak.is_dirac or (f.envelope is not None and not f.envelope.is_constant):
            raise NotImplementedError("only bare Dirac combs convolve in comb form")
        if f.tau != 0.0:
            raise NotImplementedError("modulated comb convolution; sample it first")
        return replace(f, peak=g.scaled(f.peak.scale))
    if isinstance(f, GridFunction) and isinstance(g, AnalyticShape):
        if g.is_dirac:
            return f * g.scale
        return convolve(f, g.sample(_centered_origin(f), f.step, len(f), f.axis))
    if isinstance(f, GridFunction) and isinstance(g, CombFunction):
        f, g = g, f
    if isinstance(f, CombFunction) and isinstance(g, GridFunction):
        return convolve(f.sample(g.origin, g.step, len(g)), g)
    if isinstance(f, GridFunction) and isinstance(g, GridFunction):
        if not math.isclose(f.step, g.step, rel_tol=1e-12):
            step = min(f.step, g.step)
            f = resample(f, f.origin, step, int(round((len(f) - 1) * f.step / step)) + 1)
            g = resample(g, g.origin, step, int(round((len(g) - 1) * g.step / step)) + 1)
        n = len(f) + len(g) - 1
        size = 1 << (n - 1).bit_length()
        out = np.fft.ifft(np.fft.fft(f.samples, size) * np.fft.fft(g.samples, size))[:n]
        return GridFunction(out * f.step, f.origin + g.origin, f.step, f.axis)
    raise TypeError(f"cannot convolve {type(f).__name__} and {type(g).__name__}")


def _centered_origin(f: GridFunction) -> float:
    return -f.step * (len(f) // 2)


def fourier(f: TimeFrequencyFunction, origin: Optional[float] = None) -> TimeFrequencyFunction:
    """Unitary Fourier transform; the axis kind flips.

    For a grid of ``N`` samples and step ``dx`` the output has step
    ``2 pi / (N dx)``; ``origin`` places its first node (centered by default).
    """
    if isinstance(f, CombFunction):
        return _fourier_comb(f)
    if isinstance(f, AnalyticShape):
        raise TypeError("use AnalyticShape.fourier(t) for closed-form values")
    n = len(f)
    dt = 2 * np.pi / (n * f.step)
    t0 = -dt * (n // 2) if origin is None else float(origin)
    k = np.arange(n)
    pre = f.samples * np.exp(-1j * (f.axis_values - f.origin) * t0)
    out = np.fft.fft(pre) * np.exp(-1j * f.origin * (t0 + k * dt))
    return GridFunction(out * f.step / SQRT_2PI, t0, dt, flip_axis(f.axis))


def inverse_fourier(f: TimeFrequencyFunction, origin: Optional[float] = None) -> TimeFrequencyFunction:
    """Inverse of :func:`fourier` (exact round trip on grids)."""
    if isinstance(f, CombFunction):
        return _inverse_fourier_comb(f)
    n = len(f)
    dx = 2 * np.pi / (n * f.step)
    x0 = -dx * (n // 2) if origin is None else float(origin)
    k = np.arange(n)
    pre = f.samples * np.exp(1j * (f.axis_values - f.origin) * x0)
    out = np.fft.ifft(pre) * n * np.exp(1j * f.origin * (x0 + k * dx))
    return GridFunction(out * f.step / SQRT_2PI, x0, dx, flip_axis(f.axis))


def _fourier_comb(f: CombFunction) -> CombFunction:
    if not f.peak.is_dirac or f.envelope is not None or len(f.weights) != 1:
        raise NotImplementedError("closed-form transform only for a bare Dirac comb")
    period = 2 * np.pi / f.period
    scale = f.scale * f.weights[0] * f.peak.scale * comb_fourier_weight(f.period)
    scale *= np.exp(-1j * f.offset * f.tau)
    return CombFunction(period=period, offset=-f.tau, tau=f.offset, scale=scale,
                        axis=flip_axis(f.axis), n_peaks=f.n_peaks)


def _inverse_fourier_comb(f: CombFunction) -> CombFunction:
    # inverse transform is the forward one followed by x -> -x
    g = _fourier_comb(f)
    return CombFunction(period=g.period, offset=-g.offset, tau=-g.tau, scale=g.scale,
                        axis=g.axis, n_peaks=g.n_peaks)


# ----------------------------------------------------------------------------
# Poisson summation check
# ----------------------------------------------------------------------------

def comb_dft_identity_check(d: int, j: int, period: float = 1.0, *,
                            n_points: int = DEFAULT_POINTS,
                            span_periods: float = 6.0,
                            sign: int = -1) -> float:
    """Max pointwise deviation between the two sides of the comb DFT identity.

    Compares ``sum_k exp(-2 pi i j k / d) T_{k P/d}(C_P)`` with
    ``M_{sign * 2 pi j / P}(C_{P/d})`` on a common grid, Dirac peaks
    mollified identically on both sides.  With ``T`` and ``M`` as defined in
    this module the identity holds for ``sign = -1``; ``sign = +1`` is the
    variant with the opposite modulation and only agrees when ``2 j / d`` is
    an integer.
    """
    if not 0 <= j < d:
        raise ValueError(f"j must lie in [0, {d}), got {j}")
    span = span_periods * period
    step = span / n_points
    origin = -step * (n_points // 2)
    width = MOLLIFIER_STEPS * step
    x = origin + step * np.arange(n_points)
    base = dirac_comb(period)
    lhs = np.zeros(n_points, dtype=complex)
    for k in range(d):
        lhs += np.exp(-2j * np.pi * j * k / d) * translate(base, k * period / d)(x, mollify=width)
    rhs = modulate(dirac_comb(period / d), sign * 2 * np.pi * j / period)(x, mollify=width)
    return float(np.max(np.abs(lhs - rhs)))
