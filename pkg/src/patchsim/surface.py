"""Rotated planar surface code: layout, schedule, memory experiment.

Geometry uses doubled integer coordinates on a (2d+1) x (2d+1) grid:
data qubits at odd-odd points (2r+1, 2c+1) for lattice position (r, c),
plaquette measurement qubits at even-even face centers. The face whose
north-west data corner is (r, c) is X-type iff r + c is even, which
places an X plaquette in the top-left corner. Weight-2 half faces live
on the boundary: Z-type on the top and bottom edges, X-type on the left
and right. Logical X runs along the top data row, logical Z down the
left column.

Circuit qubit numbering: data qubit (r, c) -> r*d + c; the d^2 - 1
plaquette ancillas follow, ordered by face center.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import Gate, TimedCircuit
from .pauli import PauliString

# Corner offsets in doubled coordinates.
_CORNERS = {"NW": (-1, -1), "NE": (-1, 1), "SW": (1, -1), "SE": (1, 1)}

#: CNOT slot order per plaquette type (slots run over layers 3..6 of a
#: round). The X order sweeps west column then east column, the Z order
#: north row then south row; ancilla faults late in the schedule then
#: spread along pairs perpendicular to the matching logical operator,
#: so hook errors do not halve the circuit-level distance.
X_SLOT_ORDER = ("NW", "SW", "NE", "SE")
Z_SLOT_ORDER = ("NW", "NE", "SW", "SE")


@dataclass(frozen=True)
class Plaquette:
    kind: str  # "X" or "Z"
    center: tuple[int, int]  # doubled coordinates
    data: tuple[int, ...]  # data qubit indices, NW/NE/SW/SE order
    corners: tuple[str, ...]  # corner labels parallel to data
    ancilla: int  # circuit qubit index of the measurement qubit

    def data_at_corner(self, corner: str) -> int | None:
        for label, q in zip(self.corners, self.data):
            if label == corner:
                return q
        return None


class RotatedSurfaceLayout:
    def __init__(self, d: int):
        if d < 3 or d % 2 == 0:
            raise ValueError("code distance must be odd and >= 3")
        self.d = d
        self.data_qubits = [
            (2 * r + 1, 2 * c + 1) for r in range(d) for c in range(d)
        ]
        centers = self._face_centers(d)
        self.x_plaquettes: list[Plaquette] = []
        self.z_plaquettes: list[Plaquette] = []
        for i, (kind, center) in enumerate(centers):
            corners, data = [], []
            for label, (dr, dc) in _CORNERS.items():
                row, col = center[0] + dr, center[1] + dc
                if 0 < row < 2 * d and 0 < col < 2 * d:
                    corners.append(label)
                    data.append(((row - 1) // 2) * d + (col - 1) // 2)
            plaq = Plaquette(kind, center, tuple(data), tuple(corners), d * d + i)
            (self.x_plaquettes if kind == "X" else self.z_plaquettes).append(plaq)
        self.logical_x_support = tuple(range(d))  # top row
        self.logical_z_support = tuple(c * d for c in range(d))  # left column
        self.n_data = d * d
        self.n_qubits = 2 * d * d - 1

    @staticmethod
    def _face_centers(d: int) -> list[tuple[str, tuple[int, int]]]:
        centers = []
        # Bulk faces, NW data corner (r, c), X-type iff r + c even.
        for r in range(d - 1):
            for c in range(d - 1):
                kind = "X" if (r + c) % 2 == 0 else "Z"
                centers.append((kind, (2 * r + 2, 2 * c + 2)))
        for c in range(0, d - 1, 2):  # top edge, Z-type
            centers.append(("Z", (0, 2 * c + 2)))
        for c in range(1, d - 1, 2):  # bottom edge, Z-type
            centers.append(("Z", (2 * d, 2 * c + 2)))
        for r in range(1, d - 1, 2):  # left edge, X-type
            centers.append(("X", (2 * r + 2, 0)))
        for r in range(0, d - 1, 2):  # right edge, X-type
            centers.append(("X", (2 * r + 2, 2 * d)))
        centers.sort(key=lambda e: e[1])
        return centers

    @property
    def plaquettes(self) -> list[Plaquette]:
        return self.x_plaquettes + self.z_plaquettes

    def plaquette_pauli(self, plaq: Plaquette) -> PauliString:
        """Stabilizer as a PauliString over the d^2 data qubits."""
        p = PauliString.identity(self.n_data)
        for q in plaq.data:
            p = p * PauliString.single(self.n_data, q, plaq.kind)
        return p

    def logical_pauli(self, kind: str) -> PauliString:
        support = self.logical_x_support if kind == "X" else self.logical_z_support
        p = PauliString.identity(self.n_data)
        for q in support:
            p = p * PauliString.single(self.n_data, q, kind)
        return p

    def as_dict(self) -> dict:
        def plaq_row(p: Plaquette) -> dict:
            return {
                "center": list(p.center),
                "data": list(p.data),
                "corners": list(p.corners),
                "ancilla": p.ancilla,
            }

        return {
            "d": self.d,
            "data_qubits": [list(c) for c in self.data_qubits],
            "x_plaquettes": [plaq_row(p) for p in self.x_plaquettes],
            "z_plaquettes": [plaq_row(p) for p in self.z_plaquettes],
            "logical_x_support": list(self.logical_x_support),
            "logical_z_support": list(self.logical_z_support),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def build_layout(d: int) -> RotatedSurfaceLayout:
    return RotatedSurfaceLayout(d)


# ── syndrome schedule ────────────────────────────────────────────────


class SyndromeSchedule:
    """Depth-8 round: init, H, four CNOT slots, H, measure.

    X-type plaquettes use their ancilla as CNOT control (after the H
    sandwich), Z-type as CNOT target. Weight-2 boundary faces keep the
    time slots of the corners they retain, which preserves the
    round-to-round commutation parity of the bulk order.
    """

    depth = 8

    def __init__(self, layout: RotatedSurfaceLayout):
        self.layout = layout
        self.cnot_order: dict[tuple[int, int], tuple[int | None, ...]] = {}
        for plaq in layout.plaquettes:
            order = X_SLOT_ORDER if plaq.kind == "X" else Z_SLOT_ORDER
            self.cnot_order[plaq.center] = tuple(
                plaq.data_at_corner(corner) for corner in order
            )

    def slot_gates(self, slot: int) -> list[Gate]:
        """CNOT layer for slot 0..3 across all plaquettes."""
        gates = []
        for plaq in self.layout.plaquettes:
            data = self.cnot_order[plaq.center][slot]
            if data is None:
                continue
            if plaq.kind == "X":
                gates.append(Gate.cnot(plaq.ancilla, data))
            else:
                gates.append(Gate.cnot(data, plaq.ancilla))
        return gates

    def round_layers(self) -> list[list[Gate]]:
        layout = self.layout
        ancillas = [p.ancilla for p in layout.plaquettes]
        x_ancillas = [p.ancilla for p in layout.x_plaquettes]
        layers = [[Gate.init_z(a) for a in ancillas]]
        layers.append([Gate.h(a) for a in x_ancillas])
        layers.extend(self.slot_gates(slot) for slot in range(4))
        layers.append([Gate.h(a) for a in x_ancillas])
        layers.append([Gate.measure_z(a) for a in ancillas])
        return layers


# ── memory experiment ────────────────────────────────────────────────


class MemoryExperiment:
    """Logical |0> memory: ideal prep, d noisy rounds, 1 ideal round.

    Detectors are keyed (plaquette center, round) for rounds 0..d.
    Round 0 is the bare first-round flip (the noiseless frame reference
    is deterministic), later rounds XOR consecutive measurements of the
    same plaquette. The ideal final round stands in for ideal data
    readout; data qubits are never measured directly, the residual
    frame is read off the simulator instead.
    """

    def __init__(self, layout: RotatedSurfaceLayout, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        self.layout = layout
        self.schedule = SyndromeSchedule(layout)
        self.p = p
        self.rounds = layout.d

        d = layout.d
        circuit = TimedCircuit(layout.n_qubits)
        circuit.add_layer(
            [Gate.init_z(q) for q in range(layout.n_data)], noisy=False
        )
        round_layers = self.schedule.round_layers()
        for rnd in range(d + 1):
            noisy = rnd < d
            for layer in round_layers:
                circuit.add_layer(layer, noisy=noisy)
        self.circuit = circuit

        event_of = {
            (layer, qubit): i
            for i, (layer, qubit, _) in enumerate(circuit.measurement_events)
        }
        measure_layers = [1 + 8 * rnd + 7 for rnd in range(d + 1)]
        self.detector_map: dict[tuple[tuple[int, int], int], tuple[int, ...]] = {}
        for plaq in layout.plaquettes:
            events = [event_of[(li, plaq.ancilla)] for li in measure_layers]
            self.detector_map[(plaq.center, 0)] = (events[0],)
            for rnd in range(1, d + 1):
                self.detector_map[(plaq.center, rnd)] = (
                    events[rnd - 1],
                    events[rnd],
                )

        def det_columns(plaqs):
            keys = [
                (p_.center, rnd) for p_ in plaqs for rnd in range(d + 1)
            ]
            first = np.array(
                [self.detector_map[k][0] for k in keys], dtype=np.intp
            )
            second = np.array(
                [
                    self.detector_map[k][1] if len(self.detector_map[k]) > 1 else -1
                    for k in keys
                ],
                dtype=np.intp,
            )
            return keys, first, second

        self.x_detectors, self._x_e1, self._x_e2 = det_columns(layout.x_plaquettes)
        self.z_detectors, self._z_e1, self._z_e2 = det_columns(layout.z_plaquettes)

    def detector_bits(self, flips: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map measurement flips (batch, n_events) to detector bits.

        Returns (x_bits, z_bits) for the X- and Z-plaquette detectors in
        the order of x_detectors / z_detectors.
        """

        def bits(e1, e2):
            out = flips[:, e1].copy()
            has2 = e2 >= 0
            out[:, has2] ^= flips[:, e2[has2]]
            return out

        return bits(self._x_e1, self._x_e2), bits(self._z_e1, self._z_e2)

    def observable_flips(self, frame_x: np.ndarray, frame_z: np.ndarray):
        """Residual-frame logical flags per shot.

        logical Z flag: frame anticommutes with logical X (odd Z-frame
        parity on the top row); logical X flag: odd X-frame parity on
        the left column.
        """
        lx = list(self.layout.logical_x_support)
        lz = list(self.layout.logical_z_support)
        flag_z = np.logical_xor.reduce(frame_z[:, lx], axis=1)
        flag_x = np.logical_xor.reduce(frame_x[:, lz], axis=1)
        return flag_z, flag_x


def build_memory_circuit(layout: RotatedSurfaceLayout, p: float) -> MemoryExperiment:
    return MemoryExperiment(layout, p)
