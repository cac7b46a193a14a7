"""Layered Clifford circuits annotated with explicit noise locations.

A TimedCircuit is an ordered list of layers; gates inside one layer act
on pairwise-disjoint qubits and are executed simultaneously. Layers are
either noisy or ideal. Every noisy layer contributes fault sites: one
per gate (depolarizing for unitaries, flip for init/measure) plus one
idle depolarizing site for every active qubit the layer does not touch.
A qubit counts as active between the first and last layer that act on
it. Fault sites are enumerated in a fixed canonical order (layer index,
then lowest qubit) so counter-based randomness is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .pauli import PauliString


class GateKind(Enum):
    H = "H"
    CNOT = "CNOT"
    INIT_Z = "InitZ"
    INIT_X = "InitX"
    MEASURE_Z = "MeasureZ"
    MEASURE_X = "MeasureX"
    IDLE = "Idle"
    ROT_ZZ = "RotZZ"


_TWO_QUBIT = {GateKind.CNOT, GateKind.ROT_ZZ}
_MEASURE = {GateKind.MEASURE_Z, GateKind.MEASURE_X}
_INIT = {GateKind.INIT_Z, GateKind.INIT_X}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        want = 2 if self.kind in _TWO_QUBIT else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind.value} takes {want} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} qubits must be distinct")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls(GateKind.H, (q,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def init_z(cls, q: int) -> "Gate":
        return cls(GateKind.INIT_Z, (q,))

    @classmethod
    def init_x(cls, q: int) -> "Gate":
        return cls(GateKind.INIT_X, (q,))

    @classmethod
    def measure_z(cls, q: int) -> "Gate":
        return cls(GateKind.MEASURE_Z, (q,))

    @classmethod
    def measure_x(cls, q: int) -> "Gate":
        return cls(GateKind.MEASURE_X, (q,))

    @classmethod
    def idle(cls, q: int) -> "Gate":
        return cls(GateKind.IDLE, (q,))

    @classmethod
    def rot_zz(cls, q0: int, q1: int) -> "Gate":
        return cls(GateKind.ROT_ZZ, (q0, q1))


def conjugate(gate: Gate, pauli: PauliString) -> PauliString:
    """g P g^dagger for the unitary gate kinds, with signs tracked.

    RotZZ is conjugated at theta = 0, i.e. as the identity; its noise
    site is handled separately. Init and measure kinds are not unitary
    and raise.
    """
    if max(gate.qubits) >= pauli.n_qubits:
        raise ValueError("gate qubit index out of range for this PauliString")
    if gate.kind is GateKind.H:
        return pauli.conjugated_h(gate.qubits[0])
    if gate.kind is GateKind.CNOT:
        return pauli.conjugated_cnot(*gate.qubits)
    if gate.kind in (GateKind.IDLE, GateKind.ROT_ZZ):
        return pauli.copy()
    raise ValueError(f"conjugation undefined for non-unitary gate {gate.kind.value}")


# ── fault sites ──────────────────────────────────────────────────────


class SiteKind(Enum):
    SINGLE_DEPOL = "single-depolarizing"
    DOUBLE_DEPOL = "two-qubit-depolarizing"
    INIT_FLIP = "init-flip"
    MEASURE_FLIP = "measure-flip"


_SINGLE_ALTS = ("X", "Y", "Z")
_DOUBLE_ALTS = tuple(
    a + b for a in "IXYZ" for b in "IXYZ" if not (a == "I" and b == "I")
)


@dataclass(frozen=True)
class FaultSite:
    """One elementary noise location.

    site_index is the global canonical position, the key of the
    counter-based random stream. flip_pauli is the frame letter an
    init-flip injects ("X" after InitZ, "Z" after InitX). event_index
    points at the measurement record a measure-flip toggles.
    """

    site_index: int
    layer_index: int
    kind: SiteKind
    qubits: tuple[int, ...]
    flip_pauli: str | None = None
    event_index: int | None = None

    def alternatives(self) -> tuple[str, ...]:
        if self.kind is SiteKind.SINGLE_DEPOL:
            return _SINGLE_ALTS
        if self.kind is SiteKind.DOUBLE_DEPOL:
            return _DOUBLE_ALTS
        if self.kind is SiteKind.INIT_FLIP:
            return (self.flip_pauli,)
        return ("flip",)

    @property
    def coefficient_of_p(self) -> float:
        if self.kind is SiteKind.SINGLE_DEPOL:
            return 1.0 / 3.0
        if self.kind is SiteKind.DOUBLE_DEPOL:
            return 1.0 / 15.0
        return 1.0


# ── timed circuits ───────────────────────────────────────────────────


class TimedCircuit:
    def __init__(self, n_qubits: int):
        if n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        self.n_qubits = n_qubits
        self.layers: list[tuple[Gate, ...]] = []
        self.noisy: list[bool] = []
        self._sites: list[FaultSite] | None = None
        self._events: list[tuple[int, int, GateKind]] | None = None

    def add_layer(self, gates, noisy: bool = True) -> int:
        gates = tuple(gates)
        seen: set[int] = set()
        for g in gates:
            if not isinstance(g, Gate):
                raise TypeError("layers hold Gate instances")
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(f"qubit index {max(g.qubits)} out of range")
            for q in g.qubits:
                if q in seen:
                    raise ValueError(f"qubit {q} used twice in one layer")
                seen.add(q)
        self.layers.append(gates)
        self.noisy.append(bool(noisy))
        self._sites = None
        self._events = None
        return len(self.layers) - 1

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def measurement_events(self) -> list[tuple[int, int, GateKind]]:
        """(layer, qubit, kind) per measurement, in record order."""
        if self._events is None:
            events = []
            for li, layer in enumerate(self.layers):
                for g in sorted(layer, key=lambda g: g.qubits):
                    if g.kind in _MEASURE:
                        events.append((li, g.qubits[0], g.kind))
            self._events = events
        return self._events

    @property
    def n_measurements(self) -> int:
        return len(self.measurement_events)

    def event_index(self, layer_index: int, qubit: int) -> int:
        for i, (li, q, _) in enumerate(self.measurement_events):
            if li == layer_index and q == qubit:
                return i
        raise KeyError(f"no measurement at layer {layer_index}, qubit {qubit}")

    def active_window(self) -> list[tuple[int, int] | None]:
        """Per qubit, (first, last) layer with a gate; None if untouched."""
        window: list[tuple[int, int] | None] = [None] * self.n_qubits
        for li, layer in enumerate(self.layers):
            for g in layer:
                for q in g.qubits:
                    w = window[q]
                    window[q] = (li, li) if w is None else (w[0], li)
        return window

    @property
    def fault_sites(self) -> list[FaultSite]:
        if self._sites is None:
            self._sites = self._derive_sites()
        return self._sites

    def _derive_sites(self) -> list[FaultSite]:
        window = self.active_window()
        event_of = {
            (li, q): i for i, (li, q, _) in enumerate(self.measurement_events)
        }
        sites: list[FaultSite] = []
        for li, layer in enumerate(self.layers):
            if not self.noisy[li]:
                continue
            acted: set[int] = set()
            entries: list[tuple[tuple[int, ...], Gate | None]] = []
            for g in layer:
                acted.update(g.qubits)
                entries.append((g.qubits, g))
            for q in range(self.n_qubits):
                w = window[q]
                if q not in acted and w is not None and w[0] <= li <= w[1]:
                    entries.append(((q,), None))
            entries.sort(key=lambda e: e[0])
            for qubits, g in entries:
                idx = len(sites)
                if g is None or g.kind is GateKind.IDLE or g.kind is GateKind.H:
                    sites.append(FaultSite(idx, li, SiteKind.SINGLE_DEPOL, qubits))
                elif g.kind in _TWO_QUBIT:
                    sites.append(FaultSite(idx, li, SiteKind.DOUBLE_DEPOL, qubits))
                elif g.kind in _INIT:
                    flip = "X" if g.kind is GateKind.INIT_Z else "Z"
                    sites.append(
                        FaultSite(idx, li, SiteKind.INIT_FLIP, qubits, flip_pauli=flip)
                    )
                else:
                    sites.append(
                        FaultSite(
                            idx, li, SiteKind.MEASURE_FLIP, qubits,
                            event_index=event_of[(li, qubits[0])],
                        )
                    )
        return sites
