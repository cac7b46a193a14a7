"""Pauli operators as X/Z bit masks with an exact global phase.

A PauliString is stored as ``i**phase * prod_j X_j**x[j] * Z_j**z[j]``
with the X factor to the left of the Z factor on every qubit. The
Hermitian letter Y equals ``i * X * Z``, so the label ``"+XY"`` carries
internal phase 1. Composition and Clifford conjugation track the phase
exactly; :attr:`PauliString.sign` is defined only when the operator is
plus or minus a tensor of I, X, Y, Z letters.
"""

from __future__ import annotations

import numpy as np

_LABEL_PREFIXES = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OF_K = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER_OF_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliString:
    """A Pauli operator on ``n_qubits`` qubits with exact phase tracking."""

    __slots__ = ("x", "z", "phase")

    def __init__(self, x, z, phase: int = 0):
        x = np.array(x, dtype=bool)
        z = np.array(z, dtype=bool)
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z masks must be 1-d and of equal length")
        self.x = x
        self.z = z
        self.phase = int(phase) % 4

    # ── constructors ─────────────────────────────────────────────────

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(np.zeros(n_qubits, bool), np.zeros(n_qubits, bool))

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> "PauliString":
        """One non-identity letter (X, Y or Z) at ``qubit``."""
        p = cls.identity(n_qubits)
        xb, zb = _LETTERS[letter]
        p.x[qubit] = xb
        p.z[qubit] = zb
        p.phase = 1 if letter == "Y" else 0
        return p

    @classmethod
    def from_label(cls, label: str, n_qubits: int | None = None) -> "PauliString":
        """Parse labels like ``"XIZY"``, ``"-ZZ"`` or ``"+iXY"``."""
        body = label
        prefix = ""
        while body and body[0] in "+-i":
            prefix += body[0]
            body = body[1:]
        if prefix not in _LABEL_PREFIXES:
            raise ValueError(f"bad sign prefix in {label!r}")
        if n_qubits is None:
            n_qubits = len(body)
        if len(body) != n_qubits:
            raise ValueError(f"label length {len(body)} != n_qubits {n_qubits}")
        p = cls.identity(n_qubits)
        n_y = 0
        for q, letter in enumerate(body):
            if letter not in _LETTERS:
                raise ValueError(f"bad Pauli letter {letter!r}")
            xb, zb = _LETTERS[letter]
            p.x[q] = xb
            p.z[q] = zb
            n_y += letter == "Y"
        p.phase = (_LABEL_PREFIXES[prefix] + n_y) % 4
        return p

    # ── algebra ──────────────────────────────────────────────────────

    @property
    def n_qubits(self) -> int:
        return self.x.shape[0]

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def support(self) -> list[int]:
        return np.flatnonzero(self.x | self.z).tolist()

    def is_identity(self) -> bool:
        return self.phase == 0 and not self.x.any() and not self.z.any()

    def copy(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase)

    def compose(self, other: "PauliString") -> "PauliString":
        """Operator product ``self * other`` with exact phase.

        In the X-before-Z normal form the only reordering cost is moving
        other's X block left past self's Z block, one factor of -1 per
        overlapping qubit.
        """
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        swaps = int(np.count_nonzero(self.z & other.x))
        return PauliString(
            self.x ^ other.x,
            self.z ^ other.z,
            self.phase + other.phase + 2 * swaps,
        )

    __mul__ = compose

    def commutes_with(self, other: "PauliString") -> bool:
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        overlap = np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)
        return overlap % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 relative to the letter form; raises if imaginary."""
        k = (self.phase - int(np.count_nonzero(self.x & self.z))) % 4
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator is +/-i times a Pauli letter product")

    # ── single-gate Clifford conjugation (g P g^dagger) ──────────────

    def conjugated_h(self, q: int) -> "PauliString":
        # H X^a Z^b H = Z^a X^b = (-1)^(ab) X^b Z^a
        p = self.copy()
        a, b = bool(p.x[q]), bool(p.z[q])
        p.x[q], p.z[q] = b, a
        if a and b:
            p.phase = (p.phase + 2) % 4
        return p

    def conjugated_cnot(self, control: int, target: int) -> "PauliString":
        # Phase-free in the X-before-Z normal form.
        if control == target:
            raise ValueError("control and target coincide")
        p = self.copy()
        p.x[target] ^= p.x[control]
        p.z[control] ^= p.z[target]
        return p

    # ── misc ─────────────────────────────────────────────────────────

    def to_label(self) -> str:
        n_y = int(np.count_nonzero(self.x & self.z))
        k = (self.phase - n_y) % 4
        letters = "".join(
            _LETTER_OF_BITS[(int(xb), int(zb))] for xb, zb in zip(self.x, self.z)
        )
        return _PREFIX_OF_K[k] + letters

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliString({self.to_label()!r})"
