"""Exact Pauli-frame Monte Carlo over timed Clifford circuits.

The frame is a pair of boolean masks (x, z) per qubit: the Pauli error
accumulated relative to a noiseless reference run. Gates move the masks
(phases are irrelevant for flip statistics), measurements record the
mask bit that anticommutes with the measured operator, resets clear the
masks. Batches of shots are simulated as (batch, n_qubits) boolean
matrices.

Randomness is counter-based so results are byte-identical for a given
seed no matter how shots are batched or spread over workers:

    seed_key       = mix64(seed)
    shot_key       = mix64(seed_key + PHI * (shot_index + 1))
    u64(shot,site) = mix64(shot_key + PHI * (site_index + 1))
    uniform        = (u64 >> 11) * 2**-53

mix64 is the splitmix64 finalizer; site_index is the canonical fault
site position from TimedCircuit.fault_sites.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import multiprocessing

import numpy as np

from .circuit import (
    _DOUBLE_ALTS,
    FaultSite,
    GateKind,
    SiteKind,
    TimedCircuit,
)
from .pauli import PauliString

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_U64_MASK = (1 << 64) - 1

#: Marker returned by sample_fault at a measure-flip site.
MEASUREMENT_FLIP = "measurement-flip"

_N_ALTS = {
    SiteKind.SINGLE_DEPOL: 3,
    SiteKind.DOUBLE_DEPOL: 15,
    SiteKind.INIT_FLIP: 1,
    SiteKind.MEASURE_FLIP: 1,
}

# Two-qubit depolarizing lookup, indexed by 1 + alt_code; entry 0 = no fault.
_XA = np.zeros(16, bool)
_ZA = np.zeros(16, bool)
_XB = np.zeros(16, bool)
_ZB = np.zeros(16, bool)
for _k in range(1, 16):
    _a, _b = "IXYZ"[_k >> 2], "IXYZ"[_k & 3]
    _XA[_k] = _a in "XY"
    _ZA[_k] = _a in "YZ"
    _XB[_k] = _b in "XY"
    _ZB[_k] = _b in "YZ"


def mix64(v):
    """splitmix64 finalizer, vectorized over uint64 arrays."""
    v = np.asarray(v, dtype=np.uint64).copy()
    with np.errstate(over="ignore"):
        v ^= v >> np.uint64(30)
        v *= _MIX_A
        v ^= v >> np.uint64(27)
        v *= _MIX_B
        v ^= v >> np.uint64(31)
    return v


def shot_keys(seed: int, shot_indices) -> np.ndarray:
    idx = np.asarray(shot_indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        base = mix64(np.uint64(seed & _U64_MASK))
        return mix64(base + _PHI * (idx + np.uint64(1)))


def site_uniforms(keys: np.ndarray, site_indices) -> np.ndarray:
    """uniforms[shot, site] in [0, 1), shape (len(keys), len(site_indices))."""
    sidx = np.asarray(site_indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        ctr = keys[:, None] + _PHI * (sidx[None, :] + np.uint64(1))
    return (mix64(ctr) >> np.uint64(11)) * 2.0**-53


def alt_codes(kind: SiteKind, p: float, u) -> np.ndarray:
    """Map uniforms to fault alternative codes; -1 means no fault.

    Codes index FaultSite.alternatives(): 0..2 for single depolarizing,
    0..14 for two-qubit depolarizing, 0 for flips.
    """
    u = np.asarray(u, dtype=np.float64)
    out = np.full(u.shape, -1, dtype=np.int64)
    if p <= 0.0:
        return out
    n = _N_ALTS[kind]
    hit = u < p
    if hit.any():
        codes = np.minimum((u[hit] * (n / p)).astype(np.int64), n - 1)
        out[hit] = codes
    return out


def sample_fault(site: FaultSite, p: float, u: float, n_qubits: int | None = None):
    """Resolve one fault site given a uniform draw u in [0, 1).

    Returns None (no fault), a PauliString frame effect, or the
    MEASUREMENT_FLIP marker.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not 0.0 <= u < 1.0:
        raise ValueError("u must lie in [0, 1)")
    code = int(alt_codes(site.kind, p, np.float64(u)))
    if code < 0:
        return None
    if site.kind is SiteKind.MEASURE_FLIP:
        return MEASUREMENT_FLIP
    if n_qubits is None:
        n_qubits = max(site.qubits) + 1
    label = site.alternatives()[code]
    effect = PauliString.identity(n_qubits)
    for q, letter in zip(site.qubits, label if len(label) > 1 else [label]):
        if letter != "I":
            effect = effect * PauliString.single(n_qubits, q, letter)
    return effect


# ── shot records ─────────────────────────────────────────────────────


@dataclass
class ShotRecord:
    measurement_flips: np.ndarray
    final_frame: PauliString

    def __eq__(self, other):
        if not isinstance(other, ShotRecord):
            return NotImplemented
        return (
            np.array_equal(self.measurement_flips, other.measurement_flips)
            and self.final_frame == other.final_frame
        )

    def is_trivial(self) -> bool:
        return not self.measurement_flips.any() and self.final_frame.is_identity()


def _frame_pauli(x: np.ndarray, z: np.ndarray) -> PauliString:
    # Phase chosen so the label carries a plain + sign.
    return PauliString(x, z, int(np.count_nonzero(x & z)))


# ── compiled circuits ────────────────────────────────────────────────


class _NoiseGroup:
    __slots__ = ("kind", "qubits_a", "qubits_b", "site_idx", "events")

    def __init__(self, kind):
        self.kind = kind
        self.qubits_a: list[int] = []
        self.qubits_b: list[int] = []
        self.site_idx: list[int] = []
        self.events: list[int] = []

    def freeze(self):
        self.qubits_a = np.asarray(self.qubits_a, dtype=np.intp)
        self.qubits_b = np.asarray(self.qubits_b, dtype=np.intp)
        self.site_idx = np.asarray(self.site_idx, dtype=np.uint64)
        self.events = np.asarray(self.events, dtype=np.intp)
        return self


class _Layer:
    __slots__ = ("h", "cn_c", "cn_t", "init", "mz_q", "mz_e", "mx_q", "mx_e", "noise")

    def __init__(self):
        self.h: list[int] = []
        self.cn_c: list[int] = []
        self.cn_t: list[int] = []
        self.init: list[int] = []
        self.mz_q: list[int] = []
        self.mz_e: list[int] = []
        self.mx_q: list[int] = []
        self.mx_e: list[int] = []
        self.noise: dict[SiteKind, _NoiseGroup] = {}

    def freeze(self):
        for name in ("h", "cn_c", "cn_t", "init", "mz_q", "mz_e", "mx_q", "mx_e"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.intp))
        self.noise = {k: g.freeze() for k, g in self.noise.items()}
        return self


class CompiledCircuit:
    """Array form of a TimedCircuit, reused across batches."""

    def __init__(self, circuit: TimedCircuit):
        self.n_qubits = circuit.n_qubits
        self.n_events = circuit.n_measurements
        self.sites = circuit.fault_sites
        event_of = {
            (li, q): i
            for i, (li, q, _) in enumerate(circuit.measurement_events)
        }
        layers = [_Layer() for _ in circuit.layers]
        for li, layer in enumerate(circuit.layers):
            L = layers[li]
            for g in sorted(layer, key=lambda g: g.qubits):
                if g.kind is GateKind.H:
                    L.h.append(g.qubits[0])
                elif g.kind is GateKind.CNOT:
                    L.cn_c.append(g.qubits[0])
                    L.cn_t.append(g.qubits[1])
                elif g.kind in (GateKind.INIT_Z, GateKind.INIT_X):
                    L.init.append(g.qubits[0])
                elif g.kind is GateKind.MEASURE_Z:
                    L.mz_q.append(g.qubits[0])
                    L.mz_e.append(event_of[(li, g.qubits[0])])
                elif g.kind is GateKind.MEASURE_X:
                    L.mx_q.append(g.qubits[0])
                    L.mx_e.append(event_of[(li, g.qubits[0])])
        # Noise groups: one per (layer, site kind). Within a layer all
        # frame effects commute as GF(2) updates, so grouping by kind
        # preserves semantics while vectorizing cleanly.
        self.locator: list[tuple[int, SiteKind, int]] = []
        for s in self.sites:
            L = layers[s.layer_index]
            kind = s.kind
            if kind is SiteKind.INIT_FLIP:
                # Split X- and Z-flavored init flips into separate groups.
                kind = (SiteKind.INIT_FLIP, s.flip_pauli)
            g = L.noise.get(kind)
            if g is None:
                g = L.noise[kind] = _NoiseGroup(kind)
            g.qubits_a.append(s.qubits[0])
            if s.kind is SiteKind.DOUBLE_DEPOL:
                g.qubits_b.append(s.qubits[1])
            if s.kind is SiteKind.MEASURE_FLIP:
                g.events.append(s.event_index)
            self.locator.append((s.layer_index, kind, len(g.site_idx)))
            g.site_idx.append(s.site_index)
        self.layers = [L.freeze() for L in layers]


def _compiled(circuit: TimedCircuit) -> CompiledCircuit:
    cache = getattr(circuit, "_compiled_cache", None)
    if cache is not None and cache[0] == circuit.n_layers:
        return cache[1]
    cc = CompiledCircuit(circuit)
    circuit._compiled_cache = (circuit.n_layers, cc)
    return cc


# ── the batch kernel ─────────────────────────────────────────────────


def _apply_ops(L: _Layer, x, z, flips):
    if len(L.h):
        tmp = x[:, L.h].copy()
        x[:, L.h] = z[:, L.h]
        z[:, L.h] = tmp
    if len(L.cn_c):
        x[:, L.cn_t] ^= x[:, L.cn_c]
        z[:, L.cn_c] ^= z[:, L.cn_t]
    if len(L.init):
        x[:, L.init] = False
        z[:, L.init] = False
    if len(L.mz_q):
        flips[:, L.mz_e] = x[:, L.mz_q]
        z[:, L.mz_q] = False
    if len(L.mx_q):
        flips[:, L.mx_e] = z[:, L.mx_q]
        x[:, L.mx_q] = False


def _apply_random_noise(group: _NoiseGroup, keys, p, x, z, flips):
    kind = group.kind
    base_kind = kind[0] if isinstance(kind, tuple) else kind
    u = site_uniforms(keys, group.site_idx)
    if base_kind is SiteKind.SINGLE_DEPOL:
        code = alt_codes(base_kind, p, u)
        x[:, group.qubits_a] ^= (code == 0) | (code == 1)
        z[:, group.qubits_a] ^= (code == 1) | (code == 2)
    elif base_kind is SiteKind.DOUBLE_DEPOL:
        k = alt_codes(base_kind, p, u) + 1
        x[:, group.qubits_a] ^= _XA[k]
        z[:, group.qubits_a] ^= _ZA[k]
        x[:, group.qubits_b] ^= _XB[k]
        z[:, group.qubits_b] ^= _ZB[k]
    elif base_kind is SiteKind.INIT_FLIP:
        hit = u < p
        if kind[1] == "X":
            x[:, group.qubits_a] ^= hit
        else:
            z[:, group.qubits_a] ^= hit
    else:
        flips[:, group.events] ^= u < p


def _apply_forced_noise(group: _NoiseGroup, rows, pos, codes, x, z, flips):
    kind = group.kind
    base_kind = kind[0] if isinstance(kind, tuple) else kind
    if base_kind is SiteKind.SINGLE_DEPOL:
        qs = group.qubits_a[pos]
        np.logical_xor.at(x, (rows, qs), codes != 2)
        np.logical_xor.at(z, (rows, qs), codes != 0)
    elif base_kind is SiteKind.DOUBLE_DEPOL:
        k = codes + 1
        np.logical_xor.at(x, (rows, group.qubits_a[pos]), _XA[k])
        np.logical_xor.at(z, (rows, group.qubits_a[pos]), _ZA[k])
        np.logical_xor.at(x, (rows, group.qubits_b[pos]), _XB[k])
        np.logical_xor.at(z, (rows, group.qubits_b[pos]), _ZB[k])
    elif base_kind is SiteKind.INIT_FLIP:
        qs = group.qubits_a[pos]
        if kind[1] == "X":
            np.logical_xor.at(x, (rows, qs), True)
        else:
            np.logical_xor.at(z, (rows, qs), True)
    else:
        np.logical_xor.at(flips, (rows, group.events[pos]), True)


def _run_kernel(cc: CompiledCircuit, p, keys=None, forced=None, n_rows=None):
    b = len(keys) if keys is not None else n_rows
    x = np.zeros((b, cc.n_qubits), dtype=bool)
    z = np.zeros((b, cc.n_qubits), dtype=bool)
    flips = np.zeros((b, cc.n_events), dtype=bool)
    for li, L in enumerate(cc.layers):
        _apply_ops(L, x, z, flips)
        if keys is not None and p > 0.0:
            for group in L.noise.values():
                _apply_random_noise(group, keys, p, x, z, flips)
        if forced is not None:
            for kind, (rows, pos, codes) in forced.get(li, {}).items():
                _apply_forced_noise(L.noise[kind], rows, pos, codes, x, z, flips)
    return flips, x, z


# ── public simulation API ────────────────────────────────────────────


def iter_shot_batches(
    circuit: TimedCircuit,
    p: float,
    seed: int,
    n_shots: int,
    batch_size: int = 8192,
    shot_offset: int = 0,
):
    """Yield (offset, flips, frame_x, frame_z) batches in shot order."""
    cc = _compiled(circuit)
    done = 0
    while done < n_shots:
        b = min(batch_size, n_shots - done)
        keys = shot_keys(seed, np.arange(shot_offset + done, shot_offset + done + b))
        flips, x, z = _run_kernel(cc, p, keys=keys)
        yield shot_offset + done, flips, x, z
        done += b


def _run_range(args):
    circuit, p, seed, offset, count, batch_size = args
    parts = list(iter_shot_batches(circuit, p, seed, count, batch_size, offset))
    return (
        np.concatenate([f for _, f, _, _ in parts]),
        np.concatenate([x for _, _, x, _ in parts]),
        np.concatenate([z for _, _, _, z in parts]),
    )


def run_shots(
    circuit: TimedCircuit,
    p: float,
    seed: int,
    n_shots: int,
    shot_offset: int = 0,
    threads: int = 1,
    batch_size: int = 8192,
):
    """Simulate n_shots; returns (flips, frame_x, frame_z) stacked arrays.

    The result is a pure function of (circuit, p, seed, shot range):
    threads and batch_size change only how work is split.
    """
    if n_shots < 0:
        raise ValueError("n_shots must be >= 0")
    cc = _compiled(circuit)
    if n_shots == 0:
        empty = np.zeros((0, cc.n_events), bool)
        return empty, np.zeros((0, cc.n_qubits), bool), np.zeros((0, cc.n_qubits), bool)
    if threads <= 1 or n_shots < 2 * batch_size:
        return _run_range((circuit, p, seed, shot_offset, n_shots, batch_size))
    bounds = np.linspace(0, n_shots, threads + 1, dtype=int)
    jobs = [
        (circuit, p, seed, shot_offset + int(a), int(b - a), batch_size)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=len(jobs), mp_context=ctx) as pool:
        parts = list(pool.map(_run_range, jobs))
    return tuple(np.concatenate(block) for block in zip(*parts))


def simulate_shot(
    circuit: TimedCircuit, p: float, seed: int, shot_index: int = 0
) -> ShotRecord:
    """Single-shot convenience wrapper around the batch kernel."""
    flips, x, z = run_shots(circuit, p, seed, 1, shot_offset=shot_index)
    return ShotRecord(flips[0], _frame_pauli(x[0], z[0]))


# ── exhaustive single-fault enumeration ──────────────────────────────


@dataclass
class SingleFaultTable:
    """Array form of enumerate_single_faults, one row per alternative."""

    site_index: np.ndarray
    alt_code: np.ndarray
    weight: np.ndarray
    flips: np.ndarray
    frame_x: np.ndarray
    frame_z: np.ndarray

    @property
    def n_rows(self) -> int:
        return len(self.site_index)


def _forced_groups(cc: CompiledCircuit, assignments):
    """COO layout of per-row forced faults, grouped by (layer, kind)."""
    per_group: dict[tuple, list[list[int]]] = {}
    for row, row_faults in enumerate(assignments):
        for site_index, code in row_faults:
            li, kind, pos = cc.locator[site_index]
            bucket = per_group.setdefault((li, kind), [[], [], []])
            bucket[0].append(row)
            bucket[1].append(pos)
            bucket[2].append(code)
    forced: dict[int, dict] = {}
    for (li, kind), (rows, pos, codes) in per_group.items():
        forced.setdefault(li, {})[kind] = (
            np.asarray(rows, dtype=np.intp),
            np.asarray(pos, dtype=np.intp),
            np.asarray(codes, dtype=np.int64),
        )
    return forced


def run_forced(circuit: TimedCircuit, assignments):
    """Replay the circuit noiselessly with per-row forced faults.

    assignments: one sequence of (site_index, alt_code) per output row.
    Returns (flips, frame_x, frame_z).
    """
    cc = _compiled(circuit)
    forced = _forced_groups(cc, assignments)
    return _run_kernel(cc, 0.0, forced=forced, n_rows=len(assignments))


def single_fault_table(circuit: TimedCircuit, batch_size: int = 8192) -> SingleFaultTable:
    """Deterministically replay every (site, alternative) exactly once."""
    cc = _compiled(circuit)
    rows = [
        (s.site_index, code, s.coefficient_of_p)
        for s in circuit.fault_sites
        for code in range(len(s.alternatives()))
    ]
    flips_parts, x_parts, z_parts = [], [], []
    for start in range(0, len(rows), batch_size):
        chunk = rows[start : start + batch_size]
        forced = _forced_groups(cc, [[(s, c)] for s, c, _ in chunk])
        f, x, z = _run_kernel(cc, 0.0, forced=forced, n_rows=len(chunk))
        flips_parts.append(f)
        x_parts.append(x)
        z_parts.append(z)
    if rows:
        flips = np.concatenate(flips_parts)
        fx = np.concatenate(x_parts)
        fz = np.concatenate(z_parts)
    else:
        flips = np.zeros((0, cc.n_events), bool)
        fx = np.zeros((0, cc.n_qubits), bool)
        fz = np.zeros((0, cc.n_qubits), bool)
    return SingleFaultTable(
        site_index=np.asarray([r[0] for r in rows], dtype=np.intp),
        alt_code=np.asarray([r[1] for r in rows], dtype=np.int64),
        weight=np.asarray([r[2] for r in rows], dtype=np.float64),
        flips=flips,
        frame_x=fx,
        frame_z=fz,
    )


def enumerate_single_faults(circuit: TimedCircuit):
    """(FaultSite, alternative label, coefficient of p, ShotRecord) rows."""
    table = single_fault_table(circuit)
    sites = circuit.fault_sites
    out = []
    for i in range(table.n_rows):
        site = sites[table.site_index[i]]
        out.append(
            (
                site,
                site.alternatives()[table.alt_code[i]],
                float(table.weight[i]),
                ShotRecord(
                    table.flips[i], _frame_pauli(table.frame_x[i], table.frame_z[i])
                ),
            )
        )
    return out
