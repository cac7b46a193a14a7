"""Rotation-ancilla injection on a growing surface-code patch.

Stage 1 entangles the four corner data qubits of the patch into a
distance-2 block carrying one protected qubit and one gauge qubit,
applies the two-qubit rotation between the left-column corners (at
angle zero, so the Clifford frame stays exact while the gate keeps its
noise site), and measures the block checks twice through four helper
qubits. A shot survives stage 1 only if both check products read +1 in
both rounds. Stage 2 initializes the remaining patch qubits, runs one
noisy syndrome round of the full patch plus one ideal round, and keeps
the shot only if every outcome fixed by the initialization comes out
right and the two rounds agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuit import Gate, SiteKind, TimedCircuit
from .frame import run_shots, single_fault_table
from .pauli import PauliString
from .surface import RotatedSurfaceLayout, SyndromeSchedule, build_layout

__all__ = [
    "FourTwoTwoCode",
    "InjectionOutcome",
    "InjectionProtocol",
    "InjectionResult",
    "VariantKind",
    "apply_stage1_postselection",
    "build_injection_protocol",
    "build_stage1_circuit",
    "build_stage2_circuit",
    "oracle_leading_coefficients",
    "pipelined_depth_bound",
    "run_injection_experiment",
]

STAGE_ACCEPTED = "accepted"
STAGE_REJECTED_1 = "rejected_stage1"
STAGE_REJECTED_2 = "rejected_stage2"


class VariantKind(enum.Enum):
    """How the corner-to-corner rotation is realized."""

    DIRECT = "direct"
    INDIRECT_TWO_CNOT = "indirect_two_cnot"
    INDIRECT_ANCILLA = "indirect_ancilla"


def _as_variant(variant) -> VariantKind:
    if isinstance(variant, VariantKind):
        return variant
    return VariantKind(str(variant))


def _pauli_on(n_qubits: int, x_support=(), z_support=()) -> PauliString:
    x = np.zeros(n_qubits, bool)
    z = np.zeros(n_qubits, bool)
    x[list(x_support)] = True
    z[list(z_support)] = True
    return PauliString(x, z, int(np.count_nonzero(x & z)))


@dataclass(frozen=True)
class FourTwoTwoCode:
    """2x2 data block holding one protected qubit and one gauge qubit.

    ``data`` is row-major over the block (top-left, top-right,
    bottom-left, bottom-right). Helpers 0/3 read the two X column pairs
    through basis-change CNOTs, helpers 1/2 read the two Z row pairs;
    the products M0*M3 and M1*M2 are the block's weight-4 checks. The
    protected qubit has X along the top row and Z down the left column;
    the gauge qubit is the transposed pair.
    """

    data: tuple[int, int, int, int] = (0, 1, 2, 3)
    measure: tuple[int, int, int, int] = (4, 5, 6, 7)

    def helper_support(self) -> dict[int, tuple[str, tuple[int, int]]]:
        a, b, c, e = self.data
        m0, m1, m2, m3 = self.measure
        return {
            m0: ("X", (a, c)),
            m1: ("Z", (a, b)),
            m2: ("Z", (c, e)),
            m3: ("X", (b, e)),
        }

    def stabilizer_x(self, n_qubits: int) -> PauliString:
        return _pauli_on(n_qubits, x_support=self.data)

    def stabilizer_z(self, n_qubits: int) -> PauliString:
        return _pauli_on(n_qubits, z_support=self.data)

    def logical_x(self, n_qubits: int) -> PauliString:
        a, b, _, _ = self.data
        return _pauli_on(n_qubits, x_support=(a, b))

    def logical_z(self, n_qubits: int) -> PauliString:
        a, _, c, _ = self.data
        return _pauli_on(n_qubits, z_support=(a, c))

    def gauge_x(self, n_qubits: int) -> PauliString:
        a, _, c, _ = self.data
        return _pauli_on(n_qubits, x_support=(a, c))

    def gauge_z(self, n_qubits: int) -> PauliString:
        a, b, _, _ = self.data
        return _pauli_on(n_qubits, z_support=(a, b))


@dataclass(frozen=True)
class InjectionOutcome:
    stage_reached: str
    logical_z_error: bool
    logical_x_error: bool
    rounds_used: int

    def __post_init__(self):
        stages = (STAGE_ACCEPTED, STAGE_REJECTED_1, STAGE_REJECTED_2)
        if self.stage_reached not in stages:
            raise ValueError(f"unknown stage {self.stage_reached!r}")
        if self.stage_reached != STAGE_ACCEPTED and (
            self.logical_z_error or self.logical_x_error
        ):
            raise ValueError("error flags are meaningful only when accepted")

    @property
    def accepted(self) -> bool:
        return self.stage_reached == STAGE_ACCEPTED


def apply_stage1_postselection(rounds) -> bool:
    """Keep a shot iff both check products repeat and read +1.

    ``rounds`` holds exactly two rounds of helper outcomes
    (M0, M1, M2, M3), each +/-1. The X check is the product M0*M3, the
    Z check M1*M2; individual helper outcomes are random even without
    noise (consecutive helpers read anticommuting pairs), so only the
    products carry information.
    """
    rounds = [tuple(r) for r in rounds]
    if len(rounds) != 2:
        raise ValueError("expected exactly two measurement rounds")
    products = []
    for outcomes in rounds:
        if len(outcomes) != 4:
            raise ValueError("each round lists four helper outcomes")
        if any(v not in (-1, 1) for v in outcomes):
            raise ValueError("outcomes must be +/-1")
        m0, m1, m2, m3 = outcomes
        products.append((m0 * m3, m1 * m2))
    # A clean first round plus round-to-round agreement means every
    # product must read +1.
    return products[0] == products[1] == (1, 1)


def _emit_stage1(circuit, code, variant, rotation_helper):
    """Append encoding, rotation block and two check rounds.

    Returns (rotation_layer, helper_events, m4_event) where
    helper_events maps helper qubit -> measurement column per round.
    """
    a, b, c, e = code.data
    m0, m1, m2, m3 = code.measure
    circuit.add_layer([Gate.init_z(q) for q in (a, b, c, e)])
    circuit.add_layer([Gate.h(b), Gate.h(e)])
    circuit.add_layer([Gate.cnot(b, a), Gate.cnot(e, c)])
    m4_event = None
    if variant is VariantKind.DIRECT:
        rotation_layer = circuit.add_layer([Gate.rot_zz(a, c)])
    elif variant is VariantKind.INDIRECT_TWO_CNOT:
        # Conjugation turns the single-qubit rotation on the lower
        # corner into the corner-pair rotation.
        circuit.add_layer([Gate.cnot(a, c)])
        rotation_layer = circuit.add_layer([Gate.idle(c)])
        circuit.add_layer([Gate.cnot(a, c)])
    else:
        m4 = rotation_helper
        circuit.add_layer([Gate.init_z(m4)])
        circuit.add_layer([Gate.cnot(a, m4)])
        circuit.add_layer([Gate.cnot(c, m4)])
        rotation_layer = circuit.add_layer([Gate.idle(m4)])
        circuit.add_layer([Gate.cnot(c, m4)])
        circuit.add_layer([Gate.cnot(a, m4)])
        lay = circuit.add_layer([Gate.measure_z(m4)])
        m4_event = circuit.event_index(lay, m4)
    helper_events = []
    for _ in range(2):
        circuit.add_layer([Gate.init_z(m0), Gate.init_z(m3)])
        circuit.add_layer([Gate.h(m0), Gate.h(m3)])
        circuit.add_layer([Gate.cnot(m0, a), Gate.cnot(m3, b)])
        circuit.add_layer(
            [
                Gate.cnot(m0, c),
                Gate.cnot(m3, e),
                Gate.init_z(m1),
                Gate.init_z(m2),
            ]
        )
        circuit.add_layer([Gate.cnot(a, m1), Gate.cnot(c, m2)])
        circuit.add_layer([Gate.cnot(b, m1), Gate.cnot(e, m2)])
        circuit.add_layer([Gate.h(m0), Gate.h(m3)])
        lay = circuit.add_layer([Gate.measure_z(q) for q in (m0, m1, m2, m3)])
        helper_events.append(
            {q: circuit.event_index(lay, q) for q in (m0, m1, m2, m3)}
        )
    return rotation_layer, helper_events, m4_event


def build_stage1_circuit(variant) -> TimedCircuit:
    """Stand-alone stage 1 on qubits 0-3 with helpers 4-7 (8 = rotation
    helper where the variant needs one)."""
    variant = _as_variant(variant)
    n = 9 if variant is VariantKind.INDIRECT_ANCILLA else 8
    circuit = TimedCircuit(n)
    _emit_stage1(circuit, FourTwoTwoCode(), variant, rotation_helper=8)
    return circuit


def _corner_block(layout: RotatedSurfaceLayout) -> FourTwoTwoCode:
    base = layout.n_qubits
    return FourTwoTwoCode(
        data=(0, 1, layout.d, layout.d + 1),
        measure=(base, base + 1, base + 2, base + 3),
    )


def _fresh_sets(layout: RotatedSurfaceLayout) -> tuple[set[int], set[int]]:
    """Fresh data qubits by initialization basis: (|+> set, |0> set)."""
    d = layout.d
    block = {0, 1, d, d + 1}
    plus: set[int] = set()
    zero: set[int] = set()
    for q in range(layout.n_data):
        if q in block:
            continue
        if q // d < 2:
            plus.add(q)
        else:
            zero.add(q)
    return plus, zero


def _emit_stage2(circuit, layout):
    """Append fresh initialization plus one noisy and one ideal round.

    Returns per-round lists of plaquette measurement columns, aligned
    with layout.plaquettes.
    """
    plus, zero = _fresh_sets(layout)
    gates = [Gate.init_x(q) for q in sorted(plus)]
    gates += [Gate.init_z(q) for q in sorted(zero)]
    circuit.add_layer(gates)
    schedule = SyndromeSchedule(layout)
    events = []
    for noisy in (True, False):
        for layer in schedule.round_layers():
            lay = circuit.add_layer(layer, noisy=noisy)
        events.append(
            [circuit.event_index(lay, p.ancilla) for p in layout.plaquettes]
        )
    return events


def build_stage2_circuit(d: int) -> TimedCircuit:
    """Patch growth alone: ideal corner-block prep, then the expansion.

    The block is prepared ideally in its post-selected class (both Z
    row pairs and the weight-4 X check at +1), standing in for an
    accepted stage-1 state with the gauge pointing up.
    """
    layout = build_layout(d)
    circuit = TimedCircuit(layout.n_qubits)
    a, b, c, e = _corner_block(layout).data
    circuit.add_layer([Gate.init_z(q) for q in (a, b, c, e)], noisy=False)
    circuit.add_layer([Gate.h(b), Gate.h(e)], noisy=False)
    circuit.add_layer([Gate.cnot(b, a), Gate.cnot(e, c)], noisy=False)
    _emit_stage2(circuit, layout)
    return circuit


def _stage2_reference(plaq, code, round2_events, plus, zero):
    """Measurement columns whose XOR gives the plaquette's fixed
    first-round outcome, or None when the initial state leaves it free.

    Z plaquettes are spoiled by any |+> qubit; their block part must be
    a row pair (recorded by the matching round-two helper: the gauge
    may point either way, so the recorded outcome is the reference, not
    +1) or the full block. X plaquettes are spoiled by any |0> qubit
    and only the full-block check is fixed.
    """
    a, b, c, e = code.data
    _, m1, m2, _ = code.measure
    support = set(plaq.data)
    block_part = support & {a, b, c, e}
    if plaq.kind == "Z":
        if support & plus:
            return None
        if not block_part:
            return ()
        if block_part == {a, b}:
            return (round2_events[m1],)
        if block_part == {c, e}:
            return (round2_events[m2],)
        if block_part == {a, b, c, e}:
            return (round2_events[m1], round2_events[m2])
        return None
    if support & zero:
        return None
    if not block_part or block_part == {a, b, c, e}:
        return ()
    return None


@dataclass
class InjectionProtocol:
    """Compiled full protocol plus the bookkeeping for its checks."""

    d: int
    variant: VariantKind
    layout: RotatedSurfaceLayout
    code: FourTwoTwoCode
    circuit: TimedCircuit
    rotation_layer: int
    stage1_events: list[dict[int, int]]
    m4_event: int | None
    round_events: list[list[int]]
    plaq_refs: list[tuple[int, ...] | None]

    def classify(self, flips, frame_x, frame_z):
        """Per-shot checks; returns (stage1_rej, stage2_rej, flag_z,
        flag_x) boolean arrays, flags masked to accepted shots."""
        F = np.asarray(flips, bool)
        s1 = np.zeros(len(F), bool)
        m0, m1, m2, m3 = self.code.measure
        for events in self.stage1_events:
            s1 |= F[:, events[m0]] ^ F[:, events[m3]]
            s1 |= F[:, events[m1]] ^ F[:, events[m2]]
        if self.m4_event is not None:
            s1 |= F[:, self.m4_event]
        s2 = np.zeros(len(F), bool)
        r1, r2 = self.round_events
        for i in range(len(r1)):
            bare = F[:, r1[i]]
            s2 |= bare ^ F[:, r2[i]]
            ref = self.plaq_refs[i]
            if ref is not None:
                fixed = bare.copy()
                for col in ref:
                    fixed = fixed ^ F[:, col]
                s2 |= fixed
        s2 &= ~s1
        accepted = ~(s1 | s2)
        lx = list(self.layout.logical_x_support)
        lz = list(self.layout.logical_z_support)
        flag_z = np.logical_xor.reduce(np.asarray(frame_z, bool)[:, lx], axis=1)
        flag_x = np.logical_xor.reduce(np.asarray(frame_x, bool)[:, lz], axis=1)
        return s1, s2, flag_z & accepted, flag_x & accepted

    def classify_shot(self, flips, frame_x, frame_z) -> InjectionOutcome:
        s1, s2, fz, fx = self.classify(
            np.asarray(flips, bool)[None, :],
            np.asarray(frame_x, bool)[None, :],
            np.asarray(frame_z, bool)[None, :],
        )
        if s1[0]:
            return InjectionOutcome(STAGE_REJECTED_1, False, False, 2)
        if s2[0]:
            return InjectionOutcome(STAGE_REJECTED_2, False, False, 4)
        return InjectionOutcome(STAGE_ACCEPTED, bool(fz[0]), bool(fx[0]), 4)


def build_injection_protocol(d: int, variant) -> InjectionProtocol:
    variant = _as_variant(variant)
    layout = build_layout(d)
    code = _corner_block(layout)
    n = layout.n_qubits + 4
    if variant is VariantKind.INDIRECT_ANCILLA:
        n += 1
    circuit = TimedCircuit(n)
    rotation_layer, stage1_events, m4_event = _emit_stage1(
        circuit, code, variant, rotation_helper=layout.n_qubits + 4
    )
    round_events = _emit_stage2(circuit, layout)
    plus, zero = _fresh_sets(layout)
    plaq_refs = [
        _stage2_reference(p, code, stage1_events[1], plus, zero)
        for p in layout.plaquettes
    ]
    return InjectionProtocol(
        d=d,
        variant=variant,
        layout=layout,
        code=code,
        circuit=circuit,
        rotation_layer=rotation_layer,
        stage1_events=stage1_events,
        m4_event=m4_event,
        round_events=round_events,
        plaq_refs=plaq_refs,
    )


@dataclass(frozen=True)
class InjectionResult:
    d: int
    p: float
    variant: str
    shots: int
    accepted: int
    rejected_stage1: int
    rejected_stage2: int
    failures_z: int

    CSV_HEADER = (
        "d,p,variant,shots,accepted,rejected_stage1,rejected_stage2,P_Z,sigma"
    )

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.shots

    @property
    def acceptance_sigma(self) -> float:
        a = self.acceptance_rate
        return math.sqrt(a * (1.0 - a) / self.shots)

    @property
    def p_z(self) -> float:
        if self.accepted == 0:
            return float("nan")
        return self.failures_z / self.accepted

    @property
    def sigma_z(self) -> float:
        if self.accepted == 0:
            return float("nan")
        q = self.p_z
        return math.sqrt(q * (1.0 - q) / self.accepted)

    def csv_row(self) -> str:
        return ",".join(
            [
                str(self.d),
                f"{self.p:g}",
                self.variant,
                str(self.shots),
                str(self.accepted),
                str(self.rejected_stage1),
                str(self.rejected_stage2),
                f"{self.p_z:.8g}",
                f"{self.sigma_z:.8g}",
            ]
        )


def run_injection_experiment(
    d: int,
    p: float,
    shots: int,
    variant,
    seed: int,
    threads: int = 1,
    batch_size: int = 8192,
) -> InjectionResult:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    proto = build_injection_protocol(d, variant)
    flips, fx, fz = run_shots(
        proto.circuit, p, seed, shots, threads=threads, batch_size=batch_size
    )
    s1, s2, flag_z, _ = proto.classify(flips, fx, fz)
    return InjectionResult(
        d=d,
        p=p,
        variant=proto.variant.value,
        shots=shots,
        accepted=int(shots - s1.sum() - s2.sum()),
        rejected_stage1=int(s1.sum()),
        rejected_stage2=int(s2.sum()),
        failures_z=int(flag_z.sum()),
    )


_EXACT_COEFF = {
    SiteKind.SINGLE_DEPOL: Fraction(1, 3),
    SiteKind.DOUBLE_DEPOL: Fraction(1, 15),
    SiteKind.INIT_FLIP: Fraction(1),
    SiteKind.MEASURE_FLIP: Fraction(1),
}


def oracle_leading_coefficients(variant, d: int = 3) -> tuple[Fraction, Fraction]:
    """First-order accepted-error coefficients by exhaustive replay.

    Every elementary fault alternative runs alone through the full
    protocol. c_Z adds the exact per-alternative weights of faults that
    survive both post-selections and leave a frame anticommuting with
    the patch logical X. c_X is the X-side analogue, restricted to
    faults at or after the rotation layer: earlier X-type residuals hit
    a state that still stabilizes the block logical X, so they only
    reverse the rotation angle, which downstream consumption absorbs.
    """
    proto = build_injection_protocol(d, variant)
    table = single_fault_table(proto.circuit)
    s1, s2, flag_z, flag_x = proto.classify(
        table.flips, table.frame_x, table.frame_z
    )
    sites = proto.circuit.fault_sites
    c_z = Fraction(0)
    c_x = Fraction(0)
    for row in range(table.n_rows):
        if s1[row] or s2[row]:
            continue
        site = sites[int(table.site_index[row])]
        w = _EXACT_COEFF[site.kind]
        if flag_z[row]:
            c_z += w
        if flag_x[row] and site.layer_index >= proto.rotation_layer:
            c_x += w
    return c_z, c_x


def pipelined_depth_bound() -> int:
    """Layer budget for the whole protocol with adjacent segments
    maximally overlapped: encoding (2), the longest rotation block (7),
    then the check and growth rounds (6 + 2x8)."""
    return 2 + 7 + 6 + 2 * 8
