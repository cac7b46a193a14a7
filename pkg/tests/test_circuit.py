"""Gate/layer validation and fault-site derivation."""

import pytest

from patchsim.circuit import (
    Gate,
    GateKind,
    SiteKind,
    TimedCircuit,
    conjugate,
)
from patchsim.pauli import PauliString


def test_gate_constructors_and_validation():
    assert Gate.h(0).kind is GateKind.H
    assert Gate.cnot(0, 1).qubits == (0, 1)
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0, 1))
    with pytest.raises(ValueError):
        Gate.cnot(2, 2)
    with pytest.raises(ValueError):
        Gate.h(-1)


def test_layer_validation():
    c = TimedCircuit(3)
    c.add_layer([Gate.h(0), Gate.cnot(1, 2)])
    with pytest.raises(ValueError):
        c.add_layer([Gate.h(0), Gate.cnot(0, 1)])
    with pytest.raises(ValueError):
        c.add_layer([Gate.h(3)])


def test_conjugate_dispatch():
    p = PauliString.from_label("XI")
    assert conjugate(Gate.h(0), p) == PauliString.from_label("ZI")
    assert conjugate(Gate.cnot(0, 1), p) == PauliString.from_label("XX")
    assert conjugate(Gate.idle(0), p) == p
    assert conjugate(Gate.rot_zz(0, 1), p) == p
    with pytest.raises(ValueError):
        conjugate(Gate.measure_z(0), p)
    with pytest.raises(ValueError):
        conjugate(Gate.h(2), p)


def test_single_noisy_cnot_site():
    c = TimedCircuit(2)
    c.add_layer([Gate.cnot(0, 1)])
    sites = c.fault_sites
    assert len(sites) == 1
    s = sites[0]
    assert s.kind is SiteKind.DOUBLE_DEPOL
    assert s.qubits == (0, 1)
    assert len(s.alternatives()) == 15
    assert s.alternatives()[0] == "IX"
    assert s.alternatives()[-1] == "ZZ"
    assert s.coefficient_of_p == pytest.approx(1 / 15)


def test_single_noisy_h_site():
    c = TimedCircuit(1)
    c.add_layer([Gate.h(0)])
    sites = c.fault_sites
    assert len(sites) == 1
    assert sites[0].kind is SiteKind.SINGLE_DEPOL
    assert sites[0].alternatives() == ("X", "Y", "Z")
    assert sites[0].coefficient_of_p == pytest.approx(1 / 3)


def test_empty_and_ideal_layers_have_no_sites():
    assert TimedCircuit(2).fault_sites == []
    c = TimedCircuit(2)
    c.add_layer([Gate.h(0)], noisy=False)
    assert c.fault_sites == []


def test_init_and_measure_sites():
    c = TimedCircuit(2)
    c.add_layer([Gate.init_z(0), Gate.init_x(1)])
    c.add_layer([Gate.measure_z(0), Gate.measure_x(1)])
    sites = c.fault_sites
    kinds = [(s.kind, s.flip_pauli) for s in sites]
    assert (SiteKind.INIT_FLIP, "X") in kinds
    assert (SiteKind.INIT_FLIP, "Z") in kinds
    flips = [s for s in sites if s.kind is SiteKind.MEASURE_FLIP]
    assert len(flips) == 2
    for s in flips:
        assert s.coefficient_of_p == 1.0
        layer, qubit, _ = c.measurement_events[s.event_index]
        assert (layer, qubit) == (s.layer_index, s.qubits[0])


def test_idle_fill_window_rule():
    # Qubit 1 is touched in layers 0 and 2; the noisy gap layer 1 adds
    # an idle site. Before the first and after the last touch: nothing.
    c = TimedCircuit(2)
    c.add_layer([Gate.h(0), Gate.h(1)])
    c.add_layer([Gate.h(0)])
    c.add_layer([Gate.h(0), Gate.h(1)])
    c.add_layer([Gate.h(0)])
    sites = c.fault_sites
    idle = [
        s
        for s in sites
        if s.kind is SiteKind.SINGLE_DEPOL and s.qubits == (1,)
    ]
    assert [s.layer_index for s in idle] == [0, 1, 2]
    assert c.active_window()[1] == (0, 2)
    assert c.active_window()[0] == (0, 3)


def test_idle_fill_skips_ideal_layers():
    c = TimedCircuit(2)
    c.add_layer([Gate.h(1)])
    c.add_layer([Gate.h(0)], noisy=False)
    c.add_layer([Gate.h(1)])
    assert all(s.qubits == (1,) for s in c.fault_sites)
    assert [s.layer_index for s in c.fault_sites] == [0, 2]


def test_sites_canonically_ordered():
    c = TimedCircuit(4)
    c.add_layer([Gate.cnot(2, 3), Gate.h(0), Gate.h(1)])
    c.add_layer([Gate.h(3), Gate.h(2)])
    sites = c.fault_sites
    assert [s.site_index for s in sites] == list(range(len(sites)))
    keys = [(s.layer_index, s.qubits) for s in sites]
    assert keys == sorted(keys)


def test_measurement_events_ordering():
    c = TimedCircuit(3)
    c.add_layer([Gate.measure_z(2), Gate.measure_z(0)])
    c.add_layer([Gate.measure_x(1)])
    ev = c.measurement_events
    assert [(l, q) for l, q, _ in ev] == [(0, 0), (0, 2), (1, 1)]
    assert c.n_measurements == 3
    assert c.event_index(0, 2) == 1
    with pytest.raises(KeyError):
        c.event_index(1, 0)


def test_rot_zz_has_double_depol_site():
    c = TimedCircuit(2)
    c.add_layer([Gate.rot_zz(0, 1)])
    assert c.fault_sites[0].kind is SiteKind.DOUBLE_DEPOL
