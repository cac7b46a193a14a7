"""Injection protocol: corner-block algebra, two-stage post-selection,
exhaustive first-order coefficients, Monte Carlo agreement.

The expected leading coefficients (2/15 for the direct rotation, 9/15
and 7/15 for the two indirect forms, zero X coefficient for all three)
were counted by hand fault-by-fault before the replay oracle existed;
the oracle, and the Monte Carlo runs at small p, must reproduce them.
"""

from fractions import Fraction

import numpy as np
import pytest

from patchsim.circuit import SiteKind
from patchsim.frame import run_forced, run_shots, simulate_shot, single_fault_table
from patchsim.injection import (
    FourTwoTwoCode,
    InjectionOutcome,
    InjectionResult,
    VariantKind,
    apply_stage1_postselection,
    build_injection_protocol,
    build_stage1_circuit,
    build_stage2_circuit,
    oracle_leading_coefficients,
    pipelined_depth_bound,
    run_injection_experiment,
)

ALL_VARIANTS = list(VariantKind)


def find_site(circuit, layer, qubits, kind):
    for s in circuit.fault_sites:
        if s.layer_index == layer and s.qubits == qubits and s.kind is kind:
            return s
    raise AssertionError(f"no site at {(layer, qubits, kind)}")


def force(proto, site, alt_label):
    code = site.alternatives().index(alt_label)
    f, fx, fz = run_forced(proto.circuit, [[(site.site_index, code)]])
    return proto.classify_shot(f[0], fx[0], fz[0])


def test_variant_parsing():
    assert VariantKind("direct") is VariantKind.DIRECT
    assert {v.value for v in ALL_VARIANTS} == {
        "direct",
        "indirect_two_cnot",
        "indirect_ancilla",
    }
    with pytest.raises(ValueError):
        VariantKind("sideways")


def test_code_operator_algebra():
    code = FourTwoTwoCode()
    n = 8
    s_ops = [code.stabilizer_x(n), code.stabilizer_z(n)]
    l_ops = [code.logical_x(n), code.logical_z(n)]
    g_ops = [code.gauge_x(n), code.gauge_z(n)]
    for s in s_ops:
        for other in s_ops + l_ops + g_ops:
            assert s.commutes_with(other)
    assert not l_ops[0].commutes_with(l_ops[1])
    assert not g_ops[0].commutes_with(g_ops[1])
    for l in l_ops:
        for g in g_ops:
            assert l.commutes_with(g)
    combo = code.gauge_z(n) * code.stabilizer_z(n)
    assert not combo.x.any()
    assert list(np.flatnonzero(combo.z)) == [2, 3]


def test_code_helper_connectivity():
    code = FourTwoTwoCode()
    assert code.helper_support() == {
        4: ("X", (0, 2)),
        5: ("Z", (0, 1)),
        6: ("Z", (2, 3)),
        7: ("X", (1, 3)),
    }


def test_code_patch_embedding():
    proto = build_injection_protocol(5, "direct")
    assert proto.code.data == (0, 1, 5, 6)
    assert proto.code.measure == (49, 50, 51, 52)
    assert proto.circuit.n_qubits == 53
    lower = build_injection_protocol(5, "indirect_ancilla")
    assert lower.circuit.n_qubits == 54


def test_outcome_validation():
    ok = InjectionOutcome("accepted", True, False, 4)
    assert ok.accepted and ok.logical_z_error
    rej = InjectionOutcome("rejected_stage1", False, False, 2)
    assert not rej.accepted
    with pytest.raises(ValueError):
        InjectionOutcome("rejected_stage2", True, False, 4)
    with pytest.raises(ValueError):
        InjectionOutcome("vetoed", False, False, 2)


def test_stage1_postselection_rules():
    clean = (1, 1, 1, 1)
    assert apply_stage1_postselection([clean, clean])
    # first-round check product -1, repeated in round two
    assert not apply_stage1_postselection([(-1, 1, 1, 1), (-1, 1, 1, 1)])
    # rounds disagree on a product
    assert not apply_stage1_postselection([clean, (-1, 1, 1, 1)])
    # helper pair both -1: the products stay +1, and individual helper
    # outcomes carry no reference (they are gauge-random), so keep
    assert apply_stage1_postselection([(-1, 1, 1, -1), (-1, 1, 1, -1)])
    with pytest.raises(ValueError):
        apply_stage1_postselection([clean])
    with pytest.raises(ValueError):
        apply_stage1_postselection([clean, clean, clean])
    with pytest.raises(ValueError):
        apply_stage1_postselection([(1, 1, 1), (1, 1, 1)])
    with pytest.raises(ValueError):
        apply_stage1_postselection([(1, 0, 1, 1), clean])


def test_layer_counts_respect_depth_bound():
    assert pipelined_depth_bound() == 31
    want_stage1 = {
        VariantKind.DIRECT: 20,
        VariantKind.INDIRECT_TWO_CNOT: 22,
        VariantKind.INDIRECT_ANCILLA: 26,
    }
    for v in ALL_VARIANTS:
        c = build_stage1_circuit(v)
        assert c.n_layers == want_stage1[v]
        assert c.n_layers <= pipelined_depth_bound()
        assert c.n_measurements == (9 if v is VariantKind.INDIRECT_ANCILLA else 8)
        proto = build_injection_protocol(3, v)
        assert proto.circuit.n_layers == want_stage1[v] + 17


def test_stage1_p0_trivial():
    for v in ALL_VARIANTS:
        rec = simulate_shot(build_stage1_circuit(v), 0.0, seed=1)
        assert rec.is_trivial()


def test_protocol_p0_all_accepted():
    proto = build_injection_protocol(3, "direct")
    flips, fx, fz = run_shots(proto.circuit, 0.0, seed=2, n_shots=64)
    s1, s2, flag_z, flag_x = proto.classify(flips, fx, fz)
    assert not s1.any() and not s2.any()
    assert not flag_z.any() and not flag_x.any()
    out = proto.classify_shot(flips[0], fx[0], fz[0])
    assert out.accepted and out.rounds_used == 4


def test_forced_rotation_alternatives():
    proto = build_injection_protocol(3, "direct")
    rot = find_site(proto.circuit, proto.rotation_layer, (0, 3), SiteKind.DOUBLE_DEPOL)
    for alt, stage, z_err in [
        ("ZZ", "accepted", True),
        ("YY", "accepted", True),
        ("XX", "accepted", False),  # the X gauge pair, absorbed
        ("IZ", "rejected_stage1", False),
        ("XI", "rejected_stage1", False),
    ]:
        out = force(proto, rot, alt)
        assert out.stage_reached == stage, alt
        assert out.logical_z_error == z_err, alt
        assert not out.logical_x_error


def test_forced_gauge_hook_absorbed():
    # Z pair leaking from a round-1 row-helper CNOT lands as the Z
    # gauge operator: kept, and no logical damage.
    proto = build_injection_protocol(3, "direct")
    m1 = proto.code.measure[1]
    site = find_site(proto.circuit, 8, (0, m1), SiteKind.DOUBLE_DEPOL)
    out = force(proto, site, "ZZ")
    assert out.stage_reached == "accepted"
    assert not out.logical_z_error and not out.logical_x_error


def test_forced_data_z_detected_at_stage1():
    # Bare Z on a block corner while the column helpers are being
    # prepared flips both X-check products.
    proto = build_injection_protocol(3, "direct")
    site = find_site(proto.circuit, 4, (0,), SiteKind.SINGLE_DEPOL)
    out = force(proto, site, "Z")
    assert out.stage_reached == "rejected_stage1"
    assert out.rounds_used == 2


def test_gauge_reference_is_load_bearing():
    # The X gauge pair flips the row plaquettes and the recorded
    # round-2 helper outcomes together; comparing against +1 instead of
    # the record would junk the shot.
    proto = build_injection_protocol(3, "direct")
    rot = find_site(proto.circuit, proto.rotation_layer, (0, 3), SiteKind.DOUBLE_DEPOL)
    assert force(proto, rot, "XX").stage_reached == "accepted"
    idx = [p.data for p in proto.layout.plaquettes].index((0, 1))
    proto.plaq_refs[idx] = ()
    assert force(proto, rot, "XX").stage_reached == "rejected_stage2"


def test_oracle_coefficients():
    assert oracle_leading_coefficients("direct", 3) == (Fraction(2, 15), 0)
    assert oracle_leading_coefficients("indirect_two_cnot", 3) == (
        Fraction(9, 15),
        0,
    )
    assert oracle_leading_coefficients("indirect_ancilla", 3) == (
        Fraction(7, 15),
        0,
    )
    # stage 2 adds no accepted first-order faults at any distance
    for d in (5, 7):
        assert oracle_leading_coefficients("direct", d) == (Fraction(2, 15), 0)


def test_carrier_theta_flips_all_detected():
    # Any single X/Y component landing on the rotation carrier inside
    # the rotation block would invert part of the angle; each one must
    # die in post-selection.
    cases = {
        VariantKind.INDIRECT_TWO_CNOT: (1, 0, 10),
        VariantKind.INDIRECT_ANCILLA: (3, 3, 36),
    }
    for variant, (before, after, want_checked) in cases.items():
        proto = build_injection_protocol(3, variant)
        if variant is VariantKind.INDIRECT_TWO_CNOT:
            carrier = proto.code.data[2]
        else:
            carrier = proto.layout.n_qubits + 4
        lo = proto.rotation_layer - before
        hi = proto.rotation_layer + after
        table = single_fault_table(proto.circuit)
        s1, s2, _, _ = proto.classify(table.flips, table.frame_x, table.frame_z)
        sites = proto.circuit.fault_sites
        checked = 0
        for row in range(table.n_rows):
            s = sites[int(table.site_index[row])]
            if not (lo <= s.layer_index <= hi) or carrier not in s.qubits:
                continue
            alt = s.alternatives()[int(table.alt_code[row])]
            if s.kind in (SiteKind.SINGLE_DEPOL, SiteKind.DOUBLE_DEPOL):
                if alt[s.qubits.index(carrier)] not in ("X", "Y"):
                    continue
            elif s.kind is SiteKind.INIT_FLIP and alt != "X":
                continue
            checked += 1
            assert s1[row] or s2[row]
        assert checked == want_checked


def test_stage2_standalone_structure():
    c = build_stage2_circuit(3)
    assert c.n_layers == 20
    assert [bool(b) for b in c.noisy] == [False] * 3 + [True] * 9 + [False] * 8
    assert c.n_measurements == 16
    with pytest.raises(ValueError):
        build_stage2_circuit(4)
    flips, fx, fz = run_shots(c, 0.0, seed=3, n_shots=16)
    assert not flips.any() and not fx.any() and not fz.any()


def test_stage2_init_flip_hits_fixed_plaquette_twice():
    c = build_stage2_circuit(3)
    site = next(
        s
        for s in c.fault_sites
        if s.kind is SiteKind.INIT_FLIP and s.qubits == (6,)
    )
    f, fx, fz = run_forced(c, [[(site.site_index, 0)]])
    flipped = [c.measurement_events[i][:2] for i in np.flatnonzero(f[0])]
    assert flipped == [(11, 14), (19, 14)]
    assert fx[0, 6] and not fz[0].any()


def test_determined_plaquette_sets():
    proto = build_injection_protocol(3, "direct")
    refs = {
        p.data: ref for p, ref in zip(proto.layout.plaquettes, proto.plaq_refs)
    }
    m1, m2 = proto.code.measure[1], proto.code.measure[2]
    r2 = proto.stage1_events[1]
    assert refs[(0, 1, 3, 4)] == ()
    assert refs[(2, 5)] == ()
    assert refs[(7, 8)] == ()
    assert refs[(0, 1)] == (r2[m1],)
    assert refs[(3, 4, 6, 7)] == (r2[m2],)
    assert refs[(1, 2, 4, 5)] is None
    assert refs[(3, 6)] is None
    assert refs[(4, 5, 7, 8)] is None
    p5 = build_injection_protocol(5, "direct")
    fixed = [ref for ref in p5.plaq_refs if ref is not None]
    assert len(fixed) == 11
    refs5 = {
        p.data: ref for p, ref in zip(p5.layout.plaquettes, p5.plaq_refs)
    }
    assert refs5[(0, 1, 5, 6)] == ()
    assert refs5[(2, 3, 7, 8)] == ()
    assert refs5[(0, 1)] == (p5.stage1_events[1][p5.code.measure[1]],)
    assert refs5[(5, 6, 10, 11)] == (p5.stage1_events[1][p5.code.measure[2]],)
    assert refs5[(5, 10)] is None
    assert refs5[(2, 3)] is None


def test_mc_matches_oracle():
    # Accepted-shot logical Z rate tracks c_Z * p at small p for every
    # variant (3 sigma, fixed seeds).
    runs = [
        (1e-5, 3_000_000, "direct", 19),
        (3e-5, 1_000_000, "direct", 23),
        (1e-4, 1_000_000, "direct", 7),
        (1e-4, 500_000, "indirect_two_cnot", 13),
        (1e-4, 500_000, "indirect_ancilla", 17),
    ]
    for p, shots, variant, seed in runs:
        c_z, _ = oracle_leading_coefficients(variant, 3)
        r = run_injection_experiment(3, p, shots, variant, seed)
        assert r.failures_z > 0, (variant, p)
        assert abs(r.p_z - float(c_z) * p) < 3 * r.sigma_z, (variant, p)


def test_d9_failure_rate_window():
    r = run_injection_experiment(9, 1e-4, 20_000, "direct", seed=9)
    assert 0.05 <= 1.0 - r.acceptance_rate <= 0.15
    assert r.csv_row() == "9,0.0001,direct,20000,18020,178,1802,0,0"
    assert InjectionResult.CSV_HEADER.count(",") == r.csv_row().count(",")


def test_result_properties_and_validation():
    r = InjectionResult(
        d=3,
        p=1e-4,
        variant="direct",
        shots=1000,
        accepted=900,
        rejected_stage1=60,
        rejected_stage2=40,
        failures_z=9,
    )
    assert r.acceptance_rate == pytest.approx(0.9)
    assert r.p_z == pytest.approx(0.01)
    assert r.sigma_z == pytest.approx(np.sqrt(0.01 * 0.99 / 900))
    empty = InjectionResult(3, 1e-4, "direct", 1, 0, 1, 0, 0)
    assert np.isnan(empty.p_z) and np.isnan(empty.sigma_z)
    with pytest.raises(ValueError):
        run_injection_experiment(3, 1e-4, 0, "direct", seed=1)


def test_experiment_thread_invariance():
    a = run_injection_experiment(3, 1e-3, 5000, "direct", seed=31)
    b = run_injection_experiment(
        3, 1e-3, 5000, "direct", seed=31, threads=2, batch_size=1024
    )
    assert a == b
