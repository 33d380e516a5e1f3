"""Passive linear optical elements acting on (port x frequency) modes.

Every element is frequency diagonal: it maps the creation operator of port
``q`` at angular frequency ``omega = omega_0 + nu`` onto a superposition of
ports at the same frequency, ``a_q^dag(omega) -> sum_p t_pq(nu) a_p^dag(omega)``.
Transmissions are functions of the baseband detuning ``nu``.

Beam splitter convention: ``[[sqrt(T), i sqrt(R)], [i sqrt(R), sqrt(T)]]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .functions import FREQUENCY, AnalyticShape, GridFunction

UNITARITY_TOL = 1e-8


class StrictModeError(ValueError):
    """An element was configured outside its ideal operating range."""


# ----------------------------------------------------------------------------
# transmission functions

class Transmission:
    """A complex transmission ``t(nu)``; subclasses are immutable."""

    def __call__(self, nu) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def __mul__(self, other: "Transmission") -> "Transmission":
        return _product(self, other)

    def __add__(self, other: "Transmission") -> "Transmission":
        return _sum(self, other)


@dataclass(frozen=True)
class Constant(Transmission):
    value: complex

    def __call__(self, nu):
        return np.full(np.shape(nu), complex(self.value))


ZERO = Constant(0.0)
ONE = Constant(1.0)


@dataclass(frozen=True)
class DelayPhase(Transmission):
    """``exp(-i (omega_0 + nu) dtau)``."""

    dtau: float
    omega_0: float

    def __call__(self, nu):
        nu = np.asarray(nu, dtype=float)
        return np.exp(-1j * (self.omega_0 + nu) * self.dtau)


@dataclass(frozen=True)
class Passband(Transmission):
    """Interleaver transmission ``I_k(nu)`` for bin ``k``."""

    k: int
    spec: "InterleaverSpec"

    def __call__(self, nu):
        s = self.spec
        nu = np.asarray(nu, dtype=float)
        x = -nu  # I_k is defined on omega_0 - omega
        # offset from the nearest passband center of bin k, folded into
        # [-omega_r/2, omega_r/2); good-OI assumption: f_I vanishes beyond it
        u = np.mod(x + self.k * s.omega_r / s.d + s.omega_r / 2, s.omega_r) - s.omega_r / 2
        if s.peak.kind == "rect" and not s.peak.is_constant:
            h = s.peak.width
            if abs(h - s.omega_r / (2 * s.d)) <= 1e-12 * s.omega_r:
                # full-bin windows: assign each nu to exactly one slot so the
                # windows tile the axis (ties go to the lower slot)
                slot = np.ceil(nu * s.d / s.omega_r - 0.5).astype(np.int64) % s.d
                inside = slot == self.k % s.d
            else:
                inside = np.abs(u) <= h
            vals = np.where(inside, s.peak.scale, 0.0).astype(complex)
        else:
            vals = s.peak(u)
        return s.envelope(x) * vals


@dataclass(frozen=True)
class _Product(Transmission):
    factors: Tuple[Transmission, ...]

    def __call__(self, nu):
        out = np.ones(np.shape(nu), dtype=complex)
        for f in self.factors:
            out = out * f(nu)
        return out


@dataclass(frozen=True)
class _Sum(Transmission):
    terms: Tuple[Transmission, ...]

    def __call__(self, nu):
        out = np.zeros(np.shape(nu), dtype=complex)
        for t in self.terms:
            out = out + t(nu)
        return out


def _product(a: Transmission, b: Transmission) -> Transmission:
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.value * b.value)
    for x, y in ((a, b), (b, a)):
        if isinstance(x, Constant):
            if x.value == 0:
                return ZERO
            if x.value == 1:
                return y
    if isinstance(a, DelayPhase) and isinstance(b, DelayPhase) and a.omega_0 == b.omega_0:
        return DelayPhase(a.dtau + b.dtau, a.omega_0)
    fa = a.factors if isinstance(a, _Product) else (a,)
    fb = b.factors if isinstance(b, _Product) else (b,)
    return _Product(fa + fb)


def _sum(a: Transmission, b: Transmission) -> Transmission:
    if isinstance(a, Constant) and a.value == 0:
        return b
    if isinstance(b, Constant) and b.value == 0:
        return a
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.value + b.value)
    ta = a.terms if isinstance(a, _Sum) else (a,)
    tb = b.terms if isinstance(b, _Sum) else (b,)
    return _Sum(ta + tb)


@dataclass(frozen=True)
class _Conjugate(Transmission):
    inner: Transmission

    def __call__(self, nu):
        return np.conj(self.inner(nu))


def _conj(t: Transmission) -> Transmission:
    if isinstance(t, Constant):
        return Constant(np.conj(t.value))
    if isinstance(t, DelayPhase):
        return _Conjugate(t)
    if isinstance(t, _Conjugate):
        return t.inner
    if isinstance(t, Passband) and t.spec.is_real:
        return t
    return _Conjugate(t)


# ----------------------------------------------------------------------------
# mode maps

@dataclass(frozen=True)
class ModeMap:
    """Frequency-dependent port matrix ``entries[p][q] = t_pq(nu)``."""

    entries: Tuple[Tuple[Transmission, ...], ...]
    kind: str = "generic"
    params: Dict = field(default_factory=dict, compare=False)
    ideal: bool = True

    @property
    def n_ports_out(self) -> int:
        return len(self.entries)

    @property
    def n_ports_in(self) -> int:
        return len(self.entries[0])

    def matrix(self, nu) -> np.ndarray:
        """Stack of port matrices, shape ``(len(nu), n_out, n_in)``."""
        nu = np.atleast_1d(np.asarray(nu, dtype=float))
        out = np.empty((nu.size, self.n_ports_out, self.n_ports_in), dtype=complex)
        for p, row in enumerate(self.entries):
            for q, t in enumerate(row):
                out[:, p, q] = t(nu)
        return out

    def unitarity_error(self, nu) -> float:
        m = self.matrix(nu)
        eye = np.eye(self.n_ports_in)
        gram = np.conj(np.transpose(m, (0, 2, 1))) @ m
        return float(np.max(np.abs(gram - eye)))

    def check_unitary(self, nu, tol: float = UNITARITY_TOL) -> None:
        err = self.unitarity_error(nu)
        if err > tol:
            raise StrictModeError(f"{self.kind} map not unitary: deviation {err:.3g}")

    def then(self, other: "ModeMap") -> "ModeMap":
        """Apply ``self`` first, then ``other``."""
        return compose(other, self)

    def adjoint(self) -> "ModeMap":
        rows = tuple(tuple(_conj(self.entries[q][p]) for q in range(self.n_ports_out))
                     for p in range(self.n_ports_in))
        return ModeMap(rows, kind=f"{self.kind}^dag", params=self.params, ideal=self.ideal)


def compose(outer: ModeMap, inner: ModeMap) -> ModeMap:
    """``outer . inner``: ``inner`` acts first."""
    if outer.n_ports_in != inner.n_ports_out:
        raise ValueError("port count mismatch")
    rows = []
    for p in range(outer.n_ports_out):
        row = []
        for q in range(inner.n_ports_in):
            acc: Transmission = ZERO
            for r in range(inner.n_ports_out):
                acc = acc + outer.entries[p][r] * inner.entries[r][q]
            row.append(acc)
        rows.append(tuple(row))
    return ModeMap(tuple(rows), kind=f"{outer.kind}.{inner.kind}",
                   ideal=outer.ideal and inner.ideal)


def inverse(m: ModeMap) -> ModeMap:
    """Inverse of an ideal (unitary) map."""
    if not m.ideal:
        raise StrictModeError("only ideal maps have a unitary inverse")
    return m.adjoint()


def identity(n: int) -> ModeMap:
    return ModeMap(tuple(tuple(ONE if p == q else ZERO for q in range(n)) for p in range(n)),
                   kind="identity")


def embed(m: ModeMap, ports: Sequence[int], n_ports: int) -> ModeMap:
    """Lift ``m`` to act on ``ports`` of an ``n_ports`` system."""
    ports = list(ports)
    if len(ports) != m.n_ports_in or m.n_ports_in != m.n_ports_out:
        raise ValueError("embedding needs a square map and one port per input")
    if len(set(ports)) != len(ports) or not all(0 <= p < n_ports for p in ports):
        raise ValueError(f"invalid ports {ports} for {n_ports}-port system")
    rows = [[ONE if p == q else ZERO for q in range(n_ports)] for p in range(n_ports)]
    for i, p in enumerate(ports):
        for j, q in enumerate(ports):
            rows[p][q] = m.entries[i][j]
    return ModeMap(tuple(tuple(r) for r in rows), kind=m.kind, params=dict(m.params, ports=ports),
                   ideal=m.ideal)


# ----------------------------------------------------------------------------
# elements

def beam_splitter(reflectivity: float) -> ModeMap:
    if not 0.0 <= reflectivity <= 1.0:
        raise ValueError(f"reflectivity {reflectivity} outside [0, 1]")
    t = Constant(math.sqrt(1.0 - reflectivity))
    r = Constant(1j * math.sqrt(reflectivity))
    return ModeMap(((t, r), (r, t)), kind="beam_splitter", params={"reflectivity": reflectivity})


@dataclass(frozen=True)
class InterleaverSpec:
    """Periodic filter routing bin ``k`` of input ``j`` to output ``j + k mod d``.

    ``peak`` is the per-line passband ``f_I`` and ``envelope`` the slow
    transmission envelope ``g_I``, both functions of ``omega_0 - omega``.
    """

    d: int
    omega_r: float
    omega_0: float = 0.0
    envelope: AnalyticShape = AnalyticShape.constant()
    peak: Optional[AnalyticShape] = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not self.omega_r > 0:
            raise ValueError("omega_r must be positive")
        if self.peak is None:
            object.__setattr__(self, "peak", AnalyticShape.rect(self.omega_r / (2 * self.d)))

    @property
    def is_real(self) -> bool:
        return (np.isreal(self.peak.scale) and np.isreal(self.envelope.scale)
                and self.peak.kind in ("rect", "gaussian") and self.envelope.kind in ("rect", "gaussian"))

    @property
    def is_ideal(self) -> bool:
        p = self.peak
        return (p.kind == "rect" and abs(p.width - self.omega_r / (2 * self.d)) <= 1e-12 * self.omega_r
                and p.scale == 1 and self.envelope.is_constant and self.envelope.scale == 1)

    def passbands_overlap(self) -> bool:
        return self.peak.intensity_fwhm() > self.omega_r / self.d * (1 + 1e-12)


def interleaver(spec: InterleaverSpec, strict: bool = True) -> ModeMap:
    """``d x d`` map with entry ``(j + k mod d, j) = I_k(nu)``."""
    if strict and spec.passbands_overlap():
        raise StrictModeError("interleaver passbands overlap")
    d = spec.d
    rows = [[ZERO] * d for _ in range(d)]
    for j in range(d):
        for k in range(d):
            rows[(j + k) % d][j] = Passband(k, spec)
    return ModeMap(tuple(tuple(r) for r in rows), kind="interleaver",
                   params={"d": d, "omega_r": spec.omega_r}, ideal=spec.is_ideal)


def delay(dtau: float, omega_0: float = 0.0, n_ports: int = 1,
          ports: Optional[Sequence[int]] = None) -> ModeMap:
    """Delay ``dtau`` on ``ports`` (default all) about the carrier ``omega_0``."""
    ports = range(n_ports) if ports is None else ports
    ph = DelayPhase(dtau, omega_0)
    rows = [[(ph if (p == q and p in ports) else (ONE if p == q else ZERO)) for q in range(n_ports)]
            for p in range(n_ports)]
    return ModeMap(tuple(tuple(r) for r in rows), kind="delay", params={"dtau": dtau})


def phase_gate_delay(theta: float, omega_0: float) -> float:
    """Delay ``theta / omega_0`` on the bin-1 arm.

    With the delay factor ``exp(-i omega dtau)`` the gate is
    ``diag(1, exp(-i theta))`` at the carrier, so an X measurement after it
    measures ``cos(theta) X + sin(theta) Y``.
    """
    if omega_0 <= 0:
        raise ValueError("omega_0 must be positive")
    return theta / omega_0


def phase_gate(theta: float, omega_0: float, omega_r: float, d: int = 2,
               strict: bool = True, spec: Optional[InterleaverSpec] = None) -> ModeMap:
    """Interleaver, delay on arm 1, inverse interleaver.

    In strict mode ``|theta| <= pi/2`` (delay at most a quarter carrier
    period); larger angles go through :func:`phase_gate_cascade`.
    """
    dtau = phase_gate_delay(theta, omega_0)
    if strict and abs(dtau) > math.pi / (2 * omega_0) * (1 + 1e-12):
        raise StrictModeError(f"theta={theta} needs |dtau| > pi/(2 omega_0); cascade gates instead")
    spec = spec or InterleaverSpec(d=d, omega_r=omega_r, omega_0=omega_0)
    oi = interleaver(spec, strict=strict)
    arm = delay(dtau, omega_0, n_ports=d, ports=[1])
    m = compose(inverse(oi) if oi.ideal else oi.adjoint(), compose(arm, oi))
    return ModeMap(m.entries, kind="phase_gate", params={"theta": theta, "dtau": dtau}, ideal=oi.ideal)


def phase_gate_cascade(theta: float, omega_0: float, omega_r: float, d: int = 2) -> ModeMap:
    """Split ``theta`` into equal steps of at most ``pi/2`` and chain gates."""
    n = max(1, math.ceil(abs(theta) / (math.pi / 2) - 1e-12))
    step = phase_gate(theta / n, omega_0, omega_r, d)
    out = step
    for _ in range(n - 1):
        out = compose(step, out)
    return ModeMap(out.entries, kind="phase_gate", params={"theta": theta, "stages": n}, ideal=out.ideal)


def phase_gate_line_deviation(theta: float, omega_0: float, omega_r: float, n_peaks: int,
                              d: int = 2) -> np.ndarray:
    """Per-line deviation from ``diag(1, e^{-i theta})`` over lines ``-n..n``.

    Lines of bin 1 sit at ``nu = n omega_r + omega_r/d``; returns the
    distance of the bin-1 transmission from ``e^{-i theta}`` at each.
    """
    gate = phase_gate(theta, omega_0, omega_r, d)
    n = np.arange(-n_peaks, n_peaks + 1)
    nu = n * omega_r + omega_r / d
    # a bin-1 photon entering port 0 is routed back to port 0
    t = gate.matrix(nu)[:, 0, 0]
    return np.abs(t - np.exp(-1j * theta))


def bin_matrix(m: ModeMap, d: int, omega_r: float) -> np.ndarray:
    """Port matrix on each bin at the central line, shape ``(d, n_out, n_in)``."""
    return m.matrix(np.arange(d) * omega_r / d)


# ----------------------------------------------------------------------------
# single-photon propagation

def apply_to_amplitudes(m: ModeMap, amps: Sequence[GridFunction]) -> List[GridFunction]:
    """Propagate per-port spectral amplitudes sharing one baseband grid."""
    if len(amps) != m.n_ports_in:
        raise ValueError("one amplitude per input port required")
    ref = amps[0]
    for a in amps[1:]:
        if a.origin != ref.origin or a.step != ref.step or len(a) != len(ref):
            raise ValueError("amplitudes must share a grid")
    nu = ref.axis_values
    mat = m.matrix(nu)
    stack = np.stack([a.samples for a in amps], axis=1)
    out = np.einsum("npq,nq->np", mat, stack)
    return [GridFunction(out[:, p], ref.origin, ref.step, FREQUENCY) for p in range(m.n_ports_out)]


def place_photon(state, port: int, n_ports: int, grid=None) -> List[GridFunction]:
    """Per-port amplitudes for a single-photon ``state`` entering ``port``."""
    amp = state.spectral_amplitude(grid)
    zero = amp.with_samples(np.zeros(len(amp), dtype=complex))
    return [amp if p == port else zero for p in range(n_ports)]


def port_weights(amps: Sequence[GridFunction]) -> np.ndarray:
    return np.array([a.norm() ** 2 for a in amps])


# ----------------------------------------------------------------------------
# circuit description files

ELEMENT_KINDS = ("beam_splitter", "interleaver", "phase_gate", "delay", "swap", "pauli_x")
DETECTOR_BASES = ("X", "Z")


@dataclass(frozen=True)
class CircuitElement:
    kind: str
    ports: Tuple[int, ...]
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")


@dataclass(frozen=True)
class Detector:
    port: int
    basis: str

    def __post_init__(self):
        if self.basis not in DETECTOR_BASES:
            raise ValueError(f"detector basis must be one of {DETECTOR_BASES}")


@dataclass(frozen=True)
class Circuit:
    """An ordered element list with detectors and a heralding rule.

    The ``herald`` block names a predicate understood by the Fock simulator;
    ``target`` and ``feed_forward`` describe the expected output and
    corrections.  Anything else is carried in ``notes``.
    """

    name: str
    n_ports: int
    d: int
    elements: Tuple[CircuitElement, ...]
    detectors: Tuple[Detector, ...] = ()
    inputs: Dict = field(default_factory=dict)
    herald: Dict = field(default_factory=dict)
    target: Dict = field(default_factory=dict)
    feed_forward: Dict = field(default_factory=dict)
    expected: Dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        for el in self.elements:
            if not all(0 <= p < self.n_ports for p in el.ports):
                raise ValueError(f"element {el.kind} uses invalid ports {el.ports}")
        seen = set()
        for det in self.detectors:
            if not 0 <= det.port < self.n_ports:
                raise ValueError(f"detector on invalid port {det.port}")
            if det.port in seen:
                raise ValueError(f"port {det.port} has two detectors")
            seen.add(det.port)

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        return cls(
            name=data["name"],
            n_ports=int(data["n_ports"]),
            d=int(data.get("d", 2)),
            elements=tuple(CircuitElement(e["kind"], tuple(e["ports"]), dict(e.get("params", {})))
                           for e in data.get("elements", [])),
            detectors=tuple(Detector(int(x["port"]), x["basis"]) for x in data.get("detectors", [])),
            inputs=dict(data.get("inputs", {})),
            herald=dict(data.get("herald", {})),
            target=dict(data.get("target", {})),
            feed_forward=dict(data.get("feed_forward", {})),
            expected=dict(data.get("expected", {})),
            notes=data.get("notes", ""),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_ports": self.n_ports,
            "d": self.d,
            "elements": [{"kind": e.kind, "ports": list(e.ports), "params": e.params}
                         for e in self.elements],
            "detectors": [{"port": x.port, "basis": x.basis} for x in self.detectors],
            "inputs": self.inputs,
            "herald": self.herald,
            "target": self.target,
            "feed_forward": self.feed_forward,
            "expected": self.expected,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return Circuit.from_dict(json.load(fh))


def element_mode_map(el: CircuitElement, n_ports: int, omega_r: float = 1.0,
                     omega_0: float = 1e4) -> ModeMap:
    """Frequency-domain map of a circuit element embedded in ``n_ports``."""
    if el.kind == "beam_splitter":
        m = beam_splitter(el.params.get("reflectivity", 0.5))
    elif el.kind == "interleaver":
        m = interleaver(InterleaverSpec(d=len(el.ports), omega_r=omega_r, omega_0=omega_0))
        if el.params.get("inverse"):
            m = inverse(m)
    elif el.kind == "phase_gate":
        m = phase_gate_cascade(el.params["theta"], omega_0, omega_r, len(el.ports))
    elif el.kind == "delay":
        m = delay(el.params["dtau"], omega_0, n_ports=len(el.ports))
    elif el.kind == "swap":
        m = ModeMap(((ZERO, ONE), (ONE, ZERO)), kind="swap")
    else:
        raise ValueError(f"{el.kind} has no frequency-domain map")
    return embed(m, el.ports, n_ports)
