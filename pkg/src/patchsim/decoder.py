"""Detector graphs and minimum-weight perfect matching decoding.

The detector graph is built by exhaustive single-fault enumeration of
the memory circuit: every fault alternative flips at most two detectors
inside each plaquette-type subgraph, giving an edge (two detectors) or
a boundary edge (one detector) weighted by its total probability. The
X-plaquette subgraph catches Z-type frame errors and yields the logical
Z failure rate; the Z-plaquette subgraph catches X errors.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .frame import iter_shot_batches, single_fault_table
from .matching import min_weight_perfect_matching
from .surface import MemoryExperiment, build_layout, build_memory_circuit

BOUNDARY = "boundary"


class ScheduleInvalidError(Exception):
    """A fault pattern inconsistent with a valid code/schedule."""


class _Side:
    """One decoding subgraph: detectors of a single plaquette type."""

    def __init__(self, name: str, det_keys: list):
        self.name = name
        self.det_keys = det_keys
        self.n_det = len(det_keys)
        self.boundary = self.n_det
        self.edges: list[tuple[int, int, float, float, bool]] = []
        self.dist: np.ndarray | None = None
        self.parity: np.ndarray | None = None

    def finish(self, edge_acc: dict):
        n = self.n_det
        adj: list[list[tuple[int, float, bool]]] = [[] for _ in range(n + 1)]
        for (u, v), (q, par) in sorted(edge_acc.items()):
            if not 0.0 < q < 0.5:
                raise ScheduleInvalidError(
                    f"{self.name} edge {u}-{v} has probability {q} outside (0, 1/2)"
                )
            w = math.log((1.0 - q) / q)
            self.edges.append((u, v, q, w, par))
            adj[u].append((v, w, par))
            adj[v].append((u, w, par))
        self.dist = np.full((n, n + 1), np.inf)
        self.parity = np.zeros((n, n + 1), dtype=bool)
        for src in range(n):
            self._dijkstra(src, adj)

    def _dijkstra(self, src: int, adj):
        n = self.n_det
        dist = np.full(n + 1, np.inf)
        par = np.zeros(n + 1, dtype=bool)
        dist[src] = 0.0
        heap = [(0.0, src)]
        done = np.zeros(n + 1, dtype=bool)
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if u == self.boundary:
                continue  # defect-to-defect paths never pass through it
            for (v, w, pe) in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    par[v] = par[u] ^ pe
                    heapq.heappush(heap, (nd, v))
        self.dist[src] = dist
        self.parity[src] = par

    def decode_cols(self, cols) -> tuple[bool, float, list[tuple[int, int]]]:
        """Match fired detector columns; returns (parity, weight, pairs).

        pairs use column indices; self.boundary stands for the virtual
        boundary node.
        """
        cols = list(cols)
        k = len(cols)
        bnd = self.boundary
        if k == 0:
            return False, 0.0, []
        if k == 1:
            u = cols[0]
            return bool(self.parity[u, bnd]), float(self.dist[u, bnd]), [(u, bnd)]
        if k == 2:
            u, v = cols
            w_pair = self.dist[u, v]
            w_bnd = self.dist[u, bnd] + self.dist[v, bnd]
            if w_pair <= w_bnd:
                return bool(self.parity[u, v]), float(w_pair), [(u, v)]
            return (
                bool(self.parity[u, bnd] ^ self.parity[v, bnd]),
                float(w_bnd),
                [(u, bnd), (v, bnd)],
            )
        # Defect-complete graph: defects 0..k-1, boundary copies k..2k-1.
        edges = []
        for a in range(k):
            for b in range(a + 1, k):
                d = self.dist[cols[a], cols[b]]
                if np.isfinite(d):
                    edges.append((a, b, float(d)))
                edges.append((k + a, k + b, 0.0))
            edges.append((a, k + a, float(self.dist[cols[a], bnd])))
        matched, total = min_weight_perfect_matching(2 * k, edges)
        parity = False
        pairs = []
        for (a, b) in matched:
            if a < k and b < k:
                parity ^= bool(self.parity[cols[a], cols[b]])
                pairs.append((cols[a], cols[b]))
            elif a < k:  # b is a's boundary copy
                parity ^= bool(self.parity[cols[a], bnd])
                pairs.append((cols[a], bnd))
        return parity, float(total), pairs


class DetectorGraph:
    """Both decoding subgraphs plus key lookup tables."""

    def __init__(self, experiment: MemoryExperiment):
        self.experiment = experiment
        self.sides = {
            "X": _Side("X", experiment.x_detectors),
            "Z": _Side("Z", experiment.z_detectors),
        }
        self._col_of = {
            name: {key: i for i, key in enumerate(side.det_keys)}
            for name, side in self.sides.items()
        }

    def side_of_key(self, key) -> str:
        if key in self._col_of["X"]:
            return "X"
        if key in self._col_of["Z"]:
            return "Z"
        raise KeyError(f"unknown detector {key!r}")


@dataclass
class MatchingResult:
    pairs: list
    total_weight: float
    logical_correction: dict[str, bool]


def _accumulate_edges(side: _Side, det_bits, obs_bits, q_rows, what: str):
    acc: dict[tuple[int, int], tuple[float, bool]] = {}
    boundary = side.boundary
    for row in range(det_bits.shape[0]):
        cols = np.flatnonzero(det_bits[row])
        q = float(q_rows[row])
        if q <= 0.0:
            continue
        if len(cols) == 0:
            if obs_bits[row]:
                raise ScheduleInvalidError(
                    f"undetectable logical {what} fault (row {row})"
                )
            continue
        if len(cols) > 2:
            raise ScheduleInvalidError(
                f"fault flips {len(cols)} {side.name}-detectors (row {row})"
            )
        par = bool(obs_bits[row])
        key = (int(cols[0]), int(cols[1])) if len(cols) == 2 else (int(cols[0]), boundary)
        if key in acc:
            q0, par0 = acc[key]
            if par0 != par:
                raise ScheduleInvalidError(
                    f"parallel {side.name} edges {key} disagree on the "
                    f"logical flag (their XOR must vanish)"
                )
            acc[key] = (q0 * (1.0 - q) + q * (1.0 - q0), par0)
        else:
            acc[key] = (q, par)
    side.finish(acc)
    return side


def build_detector_graph(experiment: MemoryExperiment) -> DetectorGraph:
    if experiment.p <= 0.0:
        raise ValueError("detector graph needs p > 0")
    graph = DetectorGraph(experiment)
    table = single_fault_table(experiment.circuit)
    det_x, det_z = experiment.detector_bits(table.flips)
    obs_z, obs_x = experiment.observable_flips(table.frame_x, table.frame_z)
    q_rows = table.weight * experiment.p
    _accumulate_edges(graph.sides["X"], det_x, obs_z, q_rows, "Z")
    _accumulate_edges(graph.sides["Z"], det_z, obs_x, q_rows, "X")
    return graph


def decode(graph: DetectorGraph, defects) -> MatchingResult:
    """Match the fired detectors of both subgraphs.

    defects: iterable of detector keys (plaquette center, round).
    logical_correction maps "Z" to the X-subgraph path parity (the
    logical Z flip implied by the correction) and "X" to the Z-subgraph
    parity.
    """
    by_side = {"X": [], "Z": []}
    for key in defects:
        side = graph.side_of_key(key)
        by_side[side].append(graph._col_of[side][key])
    pairs = []
    total = 0.0
    correction = {}
    for side_name, logical in (("X", "Z"), ("Z", "X")):
        side = graph.sides[side_name]
        par, weight, col_pairs = side.decode_cols(sorted(by_side[side_name]))
        total += weight
        correction[logical] = par
        for (a, b) in col_pairs:
            pairs.append(
                (
                    side.det_keys[a],
                    BOUNDARY if b == side.boundary else side.det_keys[b],
                )
            )
    return MatchingResult(pairs=pairs, total_weight=total, logical_correction=correction)


# ── Monte Carlo logical error estimation ─────────────────────────────


@dataclass
class LogicalErrorEstimate:
    d: int
    p: float
    shots: int
    failures_z: int
    failures_x: int
    p_lz: float
    sigma_z: float
    p_lx: float
    sigma_x: float

    CSV_HEADER = "d,p,shots,failures_Z,failures_X,P_LZ,sigma_Z,P_LX,sigma_X"

    def csv_row(self) -> str:
        return (
            f"{self.d},{self.p:g},{self.shots},{self.failures_z},{self.failures_x},"
            f"{self.p_lz:.8g},{self.sigma_z:.4g},{self.p_lx:.8g},{self.sigma_x:.4g}"
        )


def _binomial_sigma(fails: int, shots: int) -> float:
    rate = fails / shots
    return math.sqrt(max(rate * (1.0 - rate), 1.0 / shots) / shots)


def _packed_signatures(experiment, flips, frame_x, frame_z):
    det_x, det_z = experiment.detector_bits(flips)
    obs_z, obs_x = experiment.observable_flips(frame_x, frame_z)
    bits = np.concatenate([det_x, det_z, obs_z[:, None], obs_x[:, None]], axis=1)
    return np.packbits(bits, axis=1)


def _decode_signatures(experiment, graph, packed, counts):
    """Decode unique packed signatures; returns (failures_z, failures_x)."""
    n_x = len(experiment.x_detectors)
    n_z = len(experiment.z_detectors)
    bits = np.unpackbits(packed, axis=1)[:, : n_x + n_z + 2].astype(bool)
    det_x = bits[:, :n_x]
    det_z = bits[:, n_x : n_x + n_z]
    obs_z = bits[:, n_x + n_z]
    obs_x = bits[:, n_x + n_z + 1]
    side_x = graph.sides["X"]
    side_z = graph.sides["Z"]
    fails_z = 0
    fails_x = 0
    for i in range(len(packed)):
        cz, _, _ = side_x.decode_cols(np.flatnonzero(det_x[i]))
        cx, _, _ = side_z.decode_cols(np.flatnonzero(det_z[i]))
        if cz != bool(obs_z[i]):
            fails_z += int(counts[i])
        if cx != bool(obs_x[i]):
            fails_x += int(counts[i])
    return fails_z, fails_x


def estimate_logical_error_rate(
    d: int,
    p: float,
    shots: int,
    seed: int,
    threads: int = 1,
    batch_size: int = 16384,
) -> LogicalErrorEstimate:
    """Monte Carlo P_LZ / P_LX for the d-round memory experiment.

    Shots sharing a (detector, observable) signature are decoded once;
    decoding is a pure function of the signature, so this is exact.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    layout = build_layout(d)
    experiment = build_memory_circuit(layout, p)
    if p == 0.0:
        zero = LogicalErrorEstimate(d, p, shots, 0, 0, 0.0, 0.0, 0.0, 0.0)
        return zero
    graph = build_detector_graph(experiment)
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        import multiprocessing

        bounds = np.linspace(0, shots, threads + 1, dtype=int)
        jobs = [
            (experiment, p, seed, int(a), int(b - a), batch_size)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=len(jobs), mp_context=ctx) as pool:
            parts = list(pool.map(_signature_worker, jobs))
        packed_all = np.concatenate(parts)
    else:
        packed_all = _signature_worker((experiment, p, seed, 0, shots, batch_size))
    uniq, counts = np.unique(packed_all, axis=0, return_counts=True)
    fails_z, fails_x = _decode_signatures(experiment, graph, uniq, counts)
    return LogicalErrorEstimate(
        d=d,
        p=p,
        shots=shots,
        failures_z=fails_z,
        failures_x=fails_x,
        p_lz=fails_z / shots,
        sigma_z=_binomial_sigma(fails_z, shots),
        p_lx=fails_x / shots,
        sigma_x=_binomial_sigma(fails_x, shots),
    )


def _signature_worker(args):
    experiment, p, seed, offset, count, batch_size = args
    parts = [
        _packed_signatures(experiment, flips, fx, fz)
        for _, flips, fx, fz in iter_shot_batches(
            experiment.circuit, p, seed, count, batch_size, offset
        )
    ]
    return np.concatenate(parts)


# ── second-order (fault-pair) prediction ─────────────────────────────


def predict_pair_failure(d: int, p: float) -> tuple[float, float]:
    """Second-order exhaustive prediction of (P_LZ, P_LX).

    Sums w_i w_j p^2 over all unordered pairs of fault alternatives at
    distinct sites, decoding each pair's combined signature. Pair
    signatures are XORs of single-fault signatures (frame propagation
    is GF(2)-linear), so nothing is re-simulated.
    """
    layout = build_layout(d)
    experiment = build_memory_circuit(layout, p)
    graph = build_detector_graph(experiment)
    table = single_fault_table(experiment.circuit)
    det_x, det_z = experiment.detector_bits(table.flips)
    obs_z, obs_x = experiment.observable_flips(table.frame_x, table.frame_z)
    n_x = det_x.shape[1]
    n_z = det_z.shape[1]
    n_bits = n_x + n_z + 2
    if n_bits > 64:
        raise ValueError("pair prediction supports up to 62 detectors")
    bits = np.concatenate([det_x, det_z, obs_z[:, None], obs_x[:, None]], axis=1)
    sigs = bits @ (np.uint64(1) << np.arange(n_bits, dtype=np.uint64))
    w = table.weight
    site = table.site_index
    r = table.n_rows
    sig_chunks = []
    wt_chunks = []
    for i in range(r - 1):
        xor = sigs[i] ^ sigs[i + 1 :]
        wts = w[i] * w[i + 1 :]
        keep = site[i + 1 :] != site[i]
        sig_chunks.append(xor[keep])
        wt_chunks.append(wts[keep])
    all_sigs = np.concatenate(sig_chunks)
    all_wts = np.concatenate(wt_chunks)
    uniq, inverse = np.unique(all_sigs, return_inverse=True)
    mass = np.bincount(inverse, weights=all_wts)
    side_x = graph.sides["X"]
    side_z = graph.sides["Z"]
    ones = np.uint64(1)
    pred_z = 0.0
    pred_x = 0.0
    for u, m in zip(uniq, mass):
        cols_x = [c for c in range(n_x) if (u >> np.uint64(c)) & ones]
        cols_z = [c for c in range(n_z) if (u >> np.uint64(n_x + c)) & ones]
        oz = bool((u >> np.uint64(n_x + n_z)) & ones)
        ox = bool((u >> np.uint64(n_x + n_z + 1)) & ones)
        cz, _, _ = side_x.decode_cols(cols_x)
        cx, _, _ = side_z.decode_cols(cols_z)
        if cz != oz:
            pred_z += m
        if cx != ox:
            pred_x += m
    return pred_z * p * p, pred_x * p * p
