"""Few-photon simulation over discrete (port x frequency-bin) modes.

A state is a polynomial in creation operators acting on the vacuum,
``sum_m c_m prod_{k in m} a_k^dag |0>``, stored as a map from sorted mode
tuples to coefficients.  A mode is ``(port, bin, label)``; the label tags a
photon's source so that fully distinguishable photons can be simulated by
giving each photon its own label.  The squared norm of a monomial with mode
occupations ``n_k`` is ``prod n_k!``, so no square roots of factorials ever
enter and probabilities are exact in ``Q(i, sqrt 2)``.

Detectors: ``Z`` resolves frequency bins, ``X`` resolves the conjugate (time)
basis ``|j_t> = d^(-1/2) sum_k exp(2 pi i j k / d) |k>``.  For ``d = 2``
outcome 0 is ``|+>`` and outcome 1 is ``|->``.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .elements import Circuit, CircuitElement, Detector
from .exact import INV_SQRT2, QI2, eighth_root

Mode = Tuple[int, int, int]
Monomial = Tuple[Mode, ...]
Outcome = Tuple[Tuple[int, Tuple[int, ...]], ...]

FLOAT_ZERO = 1e-14


class ExactnessError(ValueError):
    """A parameter has no exact representation in ``Q(i, sqrt 2)``."""


# ----------------------------------------------------------------------------
# arithmetic back ends

class Arithmetic:
    """Exact (``QI2``) or floating-point (``complex``) coefficients."""

    def __init__(self, exact: bool):
        self.exact = exact

    @property
    def zero(self):
        return QI2(0) if self.exact else 0j

    @property
    def one(self):
        return QI2(1) if self.exact else 1 + 0j

    def coerce(self, x):
        if self.exact:
            if isinstance(x, (list, tuple)):
                return QI2.from_parts(x)
            if isinstance(x, str):
                return QI2(Fraction(x))
            return QI2.coerce(x)
        if isinstance(x, (list, tuple)):
            x = QI2.from_parts(x)
        if isinstance(x, str):
            x = Fraction(x)
        return complex(x)

    def is_zero(self, c) -> bool:
        return c.is_zero() if self.exact else abs(c) < FLOAT_ZERO

    def abs2(self, c):
        return c.abs2() if self.exact else abs(c) ** 2

    def real(self, c):
        """A real-valued probability as ``Fraction``/``QI2`` or ``float``."""
        return c if self.exact else float(c.real) if isinstance(c, complex) else float(c)

    def sqrt_of(self, r) -> object:
        """Square root of a rational in ``[0, 1]``."""
        r = Fraction(r)
        if not self.exact:
            return complex(math.sqrt(r))
        root = _exact_sqrt(r)
        if root is None:
            raise ExactnessError(f"sqrt({r}) is not in Q(i, sqrt 2)")
        return root

    def phase(self, theta_pi: Union[Fraction, float]):
        """``exp(i pi theta_pi)``."""
        if self.exact:
            k = Fraction(theta_pi) * 4
            if k.denominator != 1:
                raise ExactnessError(f"phase pi*{theta_pi} is not an eighth root of unity")
            return eighth_root(int(k))
        return cmath.exp(1j * math.pi * float(theta_pi))

    def dft(self, j: int, k: int, d: int):
        """``<j_t|k> = exp(-2 pi i j k / d) / sqrt(d)``."""
        if self.exact:
            if d != 2:
                raise ExactnessError("exact X-basis detection requires d = 2")
            return INV_SQRT2 * (1 if (j * k) % 2 == 0 else -1)
        return cmath.exp(-2j * math.pi * j * k / d) / math.sqrt(d)


def _exact_sqrt(r: Fraction) -> Optional[QI2]:
    def isqrt_exact(n: int) -> Optional[int]:
        s = math.isqrt(n)
        return s if s * s == n else None

    if r < 0:
        return None
    num, den = isqrt_exact(r.numerator), isqrt_exact(r.denominator)
    if num is not None and den is not None:
        return QI2(Fraction(num, den))
    # r = 2 q^2  ->  sqrt(r) = q sqrt 2
    half = r / 2
    num, den = isqrt_exact(half.numerator), isqrt_exact(half.denominator)
    if num is not None and den is not None:
        return QI2(0, 0, Fraction(num, den))
    return None


def _factorial_weight(modes: Monomial) -> int:
    w = 1
    for _, group in itertools.groupby(modes):
        w *= math.factorial(len(list(group)))
    return w


# ----------------------------------------------------------------------------
# states

@dataclass
class FockState:
    terms: Dict[Monomial, object]
    arith: Arithmetic
    d: int = 2

    @classmethod
    def vacuum(cls, arith: Arithmetic, d: int = 2) -> "FockState":
        return cls({(): arith.one}, arith, d)

    @classmethod
    def from_qubits(cls, ports: Sequence[int], amplitudes: Dict[str, object], arith: Arithmetic,
                    d: int = 2, labels: Optional[Sequence[int]] = None) -> "FockState":
        """One photon per port, bins given by the characters of each key."""
        labels = list(labels) if labels is not None else [0] * len(ports)
        terms: Dict[Monomial, object] = {}
        for bits, amp in amplitudes.items():
            if len(bits) != len(ports):
                raise ValueError(f"basis label {bits!r} does not match ports {list(ports)}")
            mono = tuple(sorted((p, int(b), l) for p, b, l in zip(ports, bits, labels)))
            c = arith.coerce(amp)
            if not arith.is_zero(c):
                terms[mono] = c
        return cls(terms, arith, d)

    def tensor(self, other: "FockState") -> "FockState":
        out: Dict[Monomial, object] = defaultdict(lambda: self.arith.zero)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = tuple(sorted(m1 + m2))
                out[key] = out[key] + c1 * c2
        return FockState(_prune(out, self.arith), self.arith, self.d)

    def norm2(self):
        total = self.arith.zero
        for m, c in self.terms.items():
            total = total + self.arith.abs2(c) * _factorial_weight(m)
        return total

    def photon_numbers(self) -> set:
        return {len(m) for m in self.terms}

    def scaled(self, factor) -> "FockState":
        return FockState({m: c * factor for m, c in self.terms.items()}, self.arith, self.d)

    def normalized(self) -> "FockState":
        n2 = self.norm2()
        if self.arith.exact:
            root = _exact_sqrt(n2.to_fraction()) if n2.is_rational else None
            if root is None:
                raise ExactnessError("norm is not representable exactly; compare ratios instead")
            return self.scaled(root.inverse())
        return self.scaled(1 / math.sqrt(n2.real if isinstance(n2, complex) else n2))

    def strip_labels(self) -> "FockState":
        out: Dict[Monomial, object] = defaultdict(lambda: self.arith.zero)
        for m, c in self.terms.items():
            key = tuple(sorted((p, b, 0) for p, b, _ in m))
            out[key] = out[key] + c
        return FockState(_prune(out, self.arith), self.arith, self.d)


def _prune(terms: Dict[Monomial, object], arith: Arithmetic) -> Dict[Monomial, object]:
    return {m: c for m, c in terms.items() if not arith.is_zero(c)}


# ----------------------------------------------------------------------------
# elements

ModeImage = Dict[Tuple[int, int], List[Tuple[Tuple[int, int], object]]]


def _theta_pi(params: dict) -> Union[Fraction, float]:
    if "theta_pi" in params:
        v = params["theta_pi"]
        return Fraction(v) if isinstance(v, (str, int, Fraction)) else float(v)
    if "theta" in params:
        theta = float(params["theta"])
        frac = Fraction(theta / math.pi).limit_denominator(8)
        if abs(float(frac) * math.pi - theta) < 1e-12:
            return frac
        return theta / math.pi
    raise ValueError("phase gate needs theta or theta_pi")


def element_image(el: CircuitElement, d: int, arith: Arithmetic) -> ModeImage:
    """Image of each affected ``(port, bin)`` under the element."""
    img: ModeImage = {}
    ports = list(el.ports)
    if el.kind == "beam_splitter":
        if len(ports) != 2:
            raise ValueError("beam splitter acts on two ports")
        R = Fraction(str(el.params.get("reflectivity", "1/2")))
        t, r = arith.sqrt_of(1 - R), arith.sqrt_of(R) * arith.phase(Fraction(1, 2))
        p, q = ports
        for b in range(d):
            img[(p, b)] = [((p, b), t), ((q, b), r)]
            img[(q, b)] = [((p, b), r), ((q, b), t)]
    elif el.kind == "interleaver":
        m = len(ports)
        sign = -1 if el.params.get("inverse") else 1
        for j, p in enumerate(ports):
            for b in range(d):
                img[(p, b)] = [((ports[(j + sign * b) % m], b), arith.one)]
    elif el.kind == "phase_gate":
        # interleaver, delay on the arm with local index 1, inverse interleaver
        m = len(ports)
        ph = arith.phase(-_theta_pi(el.params))
        for j, p in enumerate(ports):
            for b in range(d):
                img[(p, b)] = [((p, b), ph if (j + b) % m == 1 else arith.one)]
    elif el.kind == "swap":
        p, q = ports
        for b in range(d):
            img[(p, b)] = [((q, b), arith.one)]
            img[(q, b)] = [((p, b), arith.one)]
    elif el.kind == "pauli_x":
        # logical bin shift: a frame correction, not a passive element
        for p in ports:
            for b in range(d):
                img[(p, b)] = [((p, (b + 1) % d), arith.one)]
    elif el.kind == "delay":
        if arith.exact:
            raise ExactnessError("delays are simulated in float mode only")
        dtau = float(el.params["dtau"])
        w0 = float(el.params.get("omega_0", 0.0))
        wr = float(el.params.get("omega_r", 1.0))
        for p in ports:
            for b in range(d):
                img[(p, b)] = [((p, b), cmath.exp(-1j * (w0 + b * wr / d) * dtau))]
    else:
        raise ValueError(f"unsupported element {el.kind!r}")
    return img


def apply_image(state: FockState, img: ModeImage) -> FockState:
    arith = state.arith
    out: Dict[Monomial, object] = defaultdict(lambda: arith.zero)
    for mono, c in state.terms.items():
        choices = []
        for p, b, l in mono:
            if (p, b) in img:
                choices.append([((q, k, l), a) for (q, k), a in img[(p, b)]])
            else:
                choices.append([((p, b, l), arith.one)])
        for combo in itertools.product(*choices):
            coeff = c
            for _, a in combo:
                coeff = coeff * a
            key = tuple(sorted(m for m, _ in combo))
            out[key] = out[key] + coeff
    return FockState(_prune(out, arith), arith, state.d)


def apply_element(state: FockState, el: CircuitElement) -> FockState:
    """Second-quantized action of one element."""
    return apply_image(state, element_image(el, state.d, state.arith))


def apply_elements(state: FockState, elements: Iterable[CircuitElement]) -> FockState:
    for el in elements:
        state = apply_element(state, el)
    return state


# ----------------------------------------------------------------------------
# measurement

def to_detector_basis(state: FockState, detectors: Sequence[Detector]) -> FockState:
    img: ModeImage = {}
    d = state.d
    for det in detectors:
        if det.basis == "X":
            for k in range(d):
                img[(det.port, k)] = [((det.port, j), state.arith.dft(j, k, d)) for j in range(d)]
    return apply_image(state, img) if img else state


@dataclass
class OutcomeBranch:
    """All detection records sharing one label-blind outcome.

    ``components`` holds ``(weight, remainder)`` pairs, one per distinct set
    of detected photon labels.  ``weight`` is the integer norm factor
    ``prod n!`` of the detected modes, so the squared norms
    ``weight * remainder.norm2()`` add up to ``probability``.
    """

    outcome: Outcome
    probability: object
    components: List[Tuple[int, FockState]]


def outcome_key(counts: Dict[int, List[int]]) -> Outcome:
    return tuple(sorted((p, tuple(c)) for p, c in counts.items()))


def outcome_from_json(data: Dict[str, Sequence[int]]) -> Outcome:
    return outcome_key({int(p): list(c) for p, c in data.items()})


def outcome_to_json(outcome: Outcome) -> Dict[str, List[int]]:
    return {str(p): list(c) for p, c in outcome}


def measure_all(state: FockState, detectors: Sequence[Detector]) -> Dict[Outcome, OutcomeBranch]:
    """Project onto every detector outcome."""
    arith = state.arith
    det_ports = {det.port for det in detectors}
    rotated = to_detector_basis(state, detectors)
    residual: Dict[Monomial, Dict[Monomial, object]] = defaultdict(lambda: defaultdict(lambda: arith.zero))
    for mono, c in rotated.terms.items():
        seen = tuple(m for m in mono if m[0] in det_ports)
        rest = tuple(m for m in mono if m[0] not in det_ports)
        residual[seen][rest] = residual[seen][rest] + c
    branches: Dict[Outcome, OutcomeBranch] = {}
    for seen, rest_terms in residual.items():
        comp = FockState(_prune(rest_terms, arith), arith, state.d)
        weight = _factorial_weight(seen)
        p = comp.norm2() * weight
        if arith.is_zero(p):
            continue
        counts = {port: [0] * state.d for port in det_ports}
        for port, j, _ in seen:
            counts[port][j] += 1
        key = outcome_key(counts)
        br = branches.get(key)
        if br is None:
            branches[key] = OutcomeBranch(key, p, [(weight, comp)])
        else:
            br.probability = br.probability + p
            br.components.append((weight, comp))
    return dict(sorted(branches.items()))


@dataclass
class MeasurementResult:
    probability: object
    state: Optional[FockState]


def measure(state: FockState, detectors: Sequence[Detector],
            outcome: Union[Outcome, Dict[str, Sequence[int]]]) -> MeasurementResult:
    """Probability of ``outcome`` and the remainder state.

    The remainder is normalized when that is exact (always in float mode);
    otherwise it is returned unnormalized with squared norm equal to the
    probability.  Outcomes with several label sets return the first
    component only; use :func:`measure_all` for mixtures.
    """
    key = outcome_from_json(outcome) if isinstance(outcome, dict) else outcome
    branches = measure_all(state, detectors)
    br = branches.get(key)
    if br is None:
        return MeasurementResult(state.arith.zero, None)
    weight, post = br.components[0]
    try:
        if weight != 1:
            post = post.scaled(state.arith.sqrt_of(weight))
        post = post.normalized()
    except ExactnessError:
        pass
    return MeasurementResult(br.probability, post)


# ----------------------------------------------------------------------------
# qubit read-out of remainders

PAULI_CHARS = "IXYZ"


def qubit_amplitudes(state: FockState, ports: Sequence[int]) -> Tuple[Dict[tuple, Dict[str, object]], object]:
    """Split a remainder into qubit states by label assignment.

    Returns ``({labels: {bits: amplitude}}, norm2)``; terms that do not hold
    exactly one photon in each listed port contribute to the norm only.
    """
    arith = state.arith
    groups: Dict[tuple, Dict[str, object]] = defaultdict(lambda: defaultdict(lambda: arith.zero))
    order = {p: i for i, p in enumerate(ports)}
    for mono, c in state.terms.items():
        if len(mono) != len(ports) or sorted(m[0] for m in mono) != sorted(ports):
            continue
        slots = sorted(mono, key=lambda m: order[m[0]])
        labels = tuple(m[2] for m in slots)
        bits = "".join(str(m[1]) for m in slots)
        groups[labels][bits] = groups[labels][bits] + c
    return {k: dict(v) for k, v in groups.items()}, state.norm2()


def apply_pauli_frame(amps: Dict[str, object], frame: Dict[int, str], ports: Sequence[int],
                      arith: Arithmetic, d: int = 2) -> Dict[str, object]:
    """Apply Pauli corrections (``"X"``, ``"Z"``, ``"XZ"``...) on qubit ports."""
    out = dict(amps)
    for port, ops in frame.items():
        i = list(ports).index(int(port))
        for op in ops:
            new: Dict[str, object] = defaultdict(lambda: arith.zero)
            for bits, a in out.items():
                b = int(bits[i])
                if op == "X":
                    nb = bits[:i] + str((b + 1) % d) + bits[i + 1:]
                    new[nb] = new[nb] + a
                elif op == "Z":
                    new[bits] = new[bits] + a * (arith.one if b == 0 else -arith.one)
                elif op == "Y":
                    nb = bits[:i] + str((b + 1) % d) + bits[i + 1:]
                    # Y = i X Z
                    sgn = arith.one if b == 0 else -arith.one
                    new[nb] = new[nb] + a * sgn * arith.phase(Fraction(1, 2))
                elif op == "I":
                    new[bits] = new[bits] + a
                else:
                    raise ValueError(f"unknown Pauli {op!r}")
            out = dict(new)
    return out


def overlap2(target: Dict[str, object], amps: Dict[str, object], arith: Arithmetic):
    """``|<target|amps>|^2``."""
    acc = arith.zero
    for bits, a in amps.items():
        t = target.get(bits)
        if t is not None:
            acc = acc + (t.conjugate() if arith.exact else t.conjugate()) * a
    return arith.abs2(acc)


# ----------------------------------------------------------------------------
# heralded circuits

@dataclass
class BranchRecord:
    outcome: Dict[str, List[int]]
    probability: object
    success: bool
    feed_forward: bool = False
    frame: Dict[str, str] = field(default_factory=dict)
    fidelity: Optional[object] = None

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "probability": _fmt(self.probability),
            "success": self.success,
            "feed_forward": self.feed_forward,
            "frame": self.frame,
            "fidelity": None if self.fidelity is None else _fmt(self.fidelity),
        }


@dataclass
class HeraldResult:
    circuit: str
    exact: bool
    visibility: object
    success_prob: object
    feed_forward_prob: object
    total_prob: object
    branches: List[BranchRecord]

    @property
    def feed_forward_fraction(self):
        if _is_zero(self.success_prob):
            return self.success_prob
        return self.feed_forward_prob / self.success_prob

    @property
    def min_fidelity(self):
        fids = [b.fidelity for b in self.branches if b.success and b.fidelity is not None]
        if not fids:
            return None
        if self.exact:
            return min(fids, key=lambda f: float(f))
        return min(fids)

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit,
            "mode": "exact" if self.exact else "float",
            "visibility": _fmt(self.visibility),
            "success_prob": _fmt(self.success_prob),
            "feed_forward_prob": _fmt(self.feed_forward_prob),
            "feed_forward_fraction": _fmt(self.feed_forward_fraction),
            "total_prob": _fmt(self.total_prob),
            "min_success_fidelity": None if self.min_fidelity is None else _fmt(self.min_fidelity),
            "branches": [b.to_dict() for b in self.branches],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def table(self) -> str:
        lines = [f"{'outcome':<28}{'probability':>14}  success  ff  frame      fidelity"]
        for b in self.branches:
            out = ",".join(f"{p}:{tuple(c)}" for p, c in b.outcome.items())
            fid = "" if b.fidelity is None else _fmt(b.fidelity)
            frame = ",".join(f"{p}{o}" for p, o in b.frame.items()) or "-"
            lines.append(f"{out:<28}{_fmt(b.probability):>14}  {'yes' if b.success else 'no':<7}  "
                         f"{'y' if b.feed_forward else 'n':<2}  {frame:<9}  {fid}")
        return "\n".join(lines)


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, QI2) else x == 0


def _fmt(x) -> str:
    if isinstance(x, QI2):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        if abs(x.imag) > 1e-12:
            raise ValueError(f"expected a real number, got {x}")
        x = x.real
    return repr(float(x))


def _validate_visibility(v):
    if isinstance(v, str):
        v = Fraction(v)
    if not 0 <= v <= 1:
        raise ValueError(f"visibility {v} outside [0, 1]")
    return v


def build_input(circuit: Circuit, arith: Arithmetic, distinguishable: bool) -> FockState:
    """Product of the circuit's input blocks; photons labeled by order if distinguishable."""
    state = FockState.vacuum(arith, circuit.d)
    idx = 0
    for block in circuit.inputs.get("blocks", []):
        ports = block["ports"]
        labels = list(range(idx + 1, idx + 1 + len(ports))) if distinguishable else None
        idx += len(ports)
        state = state.tensor(FockState.from_qubits(ports, block["amplitudes"], arith, circuit.d, labels))
    return state


class Simulator:
    """Runs a :class:`Circuit` with optional partial distinguishability.

    With visibility ``V`` probabilities (and fidelity numerators) are the
    mixture ``V * indistinguishable + (1 - V) * distinguishable``.
    """

    def __init__(self, exact: bool = True, visibility=1):
        self.arith = Arithmetic(exact)
        self.visibility = _validate_visibility(Fraction(visibility) if exact and not isinstance(visibility, float) else visibility)

    def set_visibility(self, v) -> None:
        v = _validate_visibility(v)
        if self.arith.exact and isinstance(v, float):
            v = Fraction(v).limit_denominator(10**12)
        self.visibility = v

    def _runs(self, circuit: Circuit, input_state: Optional[FockState]):
        v = self.visibility
        runs = []
        if v != 0:
            st = input_state if input_state is not None else build_input(circuit, self.arith, False)
            runs.append((v, st))
        if v != 1:
            if input_state is not None:
                raise ValueError("partial distinguishability needs the circuit's own input blocks")
            runs.append((1 - v, build_input(circuit, self.arith, True)))
        return runs

    def outcome_table(self, circuit: Circuit, input_state: Optional[FockState] = None):
        """Weighted branches from each run, keyed by outcome."""
        table: Dict[Outcome, List[Tuple[object, OutcomeBranch]]] = defaultdict(list)
        for weight, st in self._runs(circuit, input_state):
            out = apply_elements(st, circuit.elements)
            for key, br in measure_all(out, circuit.detectors).items():
                table[key].append((weight, br))
        return dict(sorted(table.items()))

    def run_heralded(self, circuit: Circuit, input_state: Optional[FockState] = None) -> HeraldResult:
        arith = self.arith
        herald = {outcome_from_json(b["outcome"]): b for b in circuit.herald.get("branches", [])}
        target = circuit.target
        t_ports = target.get("ports")
        t_amps = {k: arith.coerce(v) for k, v in target.get("amplitudes", {}).items()}
        t_norm = sum((arith.abs2(a) for a in t_amps.values()), arith.zero)
        ff_elements = [CircuitElement(e["kind"], tuple(e["ports"]), dict(e.get("params", {})))
                       for e in circuit.feed_forward.get("elements", [])]

        success = arith.zero
        ff_total = arith.zero
        total = arith.zero
        records = []
        for key, weighted in self.outcome_table(circuit, input_state).items():
            prob = arith.zero
            for w, br in weighted:
                prob = prob + br.probability * w
            prob = arith.real(prob)
            total = total + prob
            spec = herald.get(key)
            rec = BranchRecord(outcome_to_json(key), prob, spec is not None)
            if spec is not None:
                success = success + prob
                rec.feed_forward = bool(spec.get("feed_forward", False))
                rec.frame = {str(p): o for p, o in spec.get("frame", {}).items()}
                if rec.feed_forward:
                    ff_total = ff_total + prob
                if t_ports:
                    num = arith.zero
                    den = arith.zero
                    for w, br in weighted:
                        for k, comp in br.components:
                            if rec.feed_forward:
                                comp = apply_elements(comp, ff_elements)
                            groups, n2 = qubit_amplitudes(comp, t_ports)
                            for amps in groups.values():
                                amps = apply_pauli_frame(amps, {int(p): o for p, o in rec.frame.items()},
                                                         t_ports, arith, circuit.d)
                                num = num + overlap2(t_amps, amps, arith) * w * k
                            den = den + n2 * w * k
                    rec.fidelity = num / (den * t_norm) if arith.exact else float(
                        (num / (den * t_norm)).real if isinstance(num, complex) else num / (den * t_norm))
            records.append(rec)
        return HeraldResult(circuit.name, arith.exact, self.visibility, arith.real(success),
                            arith.real(ff_total), arith.real(total), records)


def run_heralded(circuit: Circuit, input_state: Optional[FockState] = None, exact: bool = True,
                 visibility=1) -> HeraldResult:
    return Simulator(exact, visibility).run_heralded(circuit, input_state)


def as_fraction(x) -> Fraction:
    """Exact rational value of a probability from exact mode."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return x.to_fraction()
