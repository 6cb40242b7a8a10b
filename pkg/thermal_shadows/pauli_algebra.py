# pauli_algebra.py
"""Pauli strings, Pauli-sum Hamiltonians and the local observable set.

Qubit 0 is the leftmost tensor factor, so in a basis index it is the most
significant bit.
"""
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DenseLimitError, ValidationError
from .settings import get_settings

PAULI_LETTERS = "IXYZ"


@dataclass(frozen=True)
class PauliString:
    ops: str

    def __post_init__(self):
        if not self.ops:
            raise ValidationError("a Pauli string needs at least one qubit")
        bad = set(self.ops) - set(PAULI_LETTERS)
        if bad:
            raise ValidationError(f"invalid Pauli letters {sorted(bad)} in {self.ops!r}")

    @property
    def n(self):
        return len(self.ops)

    @property
    def support(self):
        return tuple(q for q, c in enumerate(self.ops) if c != "I")

    def __str__(self):
        return self.ops


def locality(p):
    """Number of non-identity factors."""
    return sum(1 for c in p.ops if c != "I")


def observable_set(n):
    """All 1-local and 2-local Pauli strings on ``n`` qubits.

    Ordered by locality, then by support, then by letters.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    out = []
    for q in range(n):
        for a in "XYZ":
            word = ["I"] * n
            word[q] = a
            out.append(PauliString("".join(word)))
    for i, j in combinations(range(n), 2):
        for a in "XYZ":
            for b in "XYZ":
                word = ["I"] * n
                word[i] = a
                word[j] = b
                out.append(PauliString("".join(word)))
    return out


@dataclass(frozen=True)
class Hamiltonian:
    """Weighted sum of Pauli strings with distinct, non-zero terms."""

    n: int
    terms: tuple

    @classmethod
    def from_terms(cls, n, terms):
        merged = {}
        for coeff, word in terms:
            p = word if isinstance(word, PauliString) else PauliString(word)
            if p.n != n:
                raise ValidationError(f"term {p} acts on {p.n} qubits, expected {n}")
            if not np.isfinite(coeff):
                raise ValidationError(f"non-finite coefficient on {p}")
            merged[p.ops] = merged.get(p.ops, 0.0) + float(coeff)
        kept = tuple((c, PauliString(w)) for w, c in merged.items() if c != 0.0)
        return cls(n=n, terms=kept)

    @property
    def num_terms(self):
        return len(self.terms)

    @property
    def one_norm(self):
        return float(sum(abs(c) for c, _ in self.terms))

    def to_json(self):
        return {"n": self.n, "terms": [{"coeff": c, "word": p.ops} for c, p in self.terms]}

    @classmethod
    def from_json(cls, data):
        try:
            n = data["n"]
            if isinstance(n, bool) or not isinstance(n, int):
                raise TypeError(f"n must be an integer, got {n!r}")
            return cls.from_terms(n, [(float(t["coeff"]), str(t["word"])) for t in data["terms"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed Hamiltonian document: {exc}") from None


def build_xxz(n, jx, jy, jz, hx=0.0, hy=0.0, hz=0.0):
    """Open-boundary XXZ chain with uniform fields.

    H = sum_i (jx XX + jy YY + jz ZZ)_{i,i+1} + sum_i (hx X + hy Y + hz Z)_i
    """
    if n < 2:
        raise ValidationError("n must be >= 2")
    terms = []
    for i in range(n - 1):
        for coeff, letter in ((jx, "X"), (jy, "Y"), (jz, "Z")):
            word = ["I"] * n
            word[i] = word[i + 1] = letter
            terms.append((coeff, "".join(word)))
    for i in range(n):
        for coeff, letter in ((hx, "X"), (hy, "Y"), (hz, "Z")):
            word = ["I"] * n
            word[i] = letter
            terms.append((coeff, "".join(word)))
    return Hamiltonian.from_terms(n, terms)


def pauli_action(p):
    """Return ``(rows, phases)`` with ``P|b> = phases[b] |rows[b]>``."""
    n = p.n
    x_mask = z_mask = 0
    for q, c in enumerate(p.ops):
        bit = 1 << (n - 1 - q)
        if c in "XY":
            x_mask |= bit
        if c in "ZY":
            z_mask |= bit
    idx = np.arange(2 ** n)
    parity = np.zeros(2 ** n, dtype=np.int64)
    for q in range(n):
        if (z_mask >> q) & 1:
            parity ^= (idx >> q) & 1
    phases = (1j ** p.ops.count("Y")) * (1 - 2 * parity)
    return idx ^ x_mask, phases.astype(complex)


def _check_dense(n, dense_limit):
    limit = get_settings().dense_limit if dense_limit is None else dense_limit
    if n > limit:
        raise DenseLimitError(n, limit)


def matrix_of(obj, dense_limit=None):
    """Dense matrix of a Pauli string or a Hamiltonian."""
    _check_dense(obj.n, dense_limit)
    dim = 2 ** obj.n
    out = np.zeros((dim, dim), dtype=complex)
    if isinstance(obj, PauliString):
        pairs = [(1.0, obj)]
    else:
        pairs = obj.terms
    cols = np.arange(dim)
    for coeff, p in pairs:
        rows, phases = pauli_action(p)
        out[rows, cols] += coeff * phases
    return out
