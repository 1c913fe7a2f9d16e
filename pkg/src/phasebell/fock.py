"""Truncated Fock-space linear algebra for two optical modes.

Everything lives on a finite photon-number basis 0..n_max per mode. Two-mode
objects use row-major basis ordering (n_a, n_b) with n_a the slow index, so a
flattened two-mode index is ``n_a * (n_max + 1) + n_b`` and ``numpy.kron(A, B)``
realizes A acting on mode a, B on mode b.

Displacement matrices are built from the closed-form matrix elements

    <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) exp(-|alpha|^2/2) L_n^{(m-n)}(|alpha|^2)

for m >= n (conjugate relation below the diagonal), with the associated
Laguerre polynomials evaluated by their three-term recurrence and the
factorial prefactors in log space. Truncation makes the matrix non-unitary
near the cutoff; :func:`unitary_block_dim` gives the size of the leading block
on which unitarity holds to 1e-8.

All values are immutable after construction and all operations are pure, so
everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "FockCutoff",
    "ModeOperator",
    "TwoModeOperator",
    "TwoModeState",
    "default_cutoff",
    "unitary_block_dim",
    "identity_matrix",
    "number_matrix",
    "parity_matrix",
    "displacement_matrix",
    "tensor",
    "expectation",
    "expectation_product",
    "loss_channel",
]

PURE_NORM_TOL = 1e-12
MIXED_TRACE_TOL = 1e-12
PSD_EIGMIN = -1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockCutoff:
    """Highest retained photon number; per-mode dimension is n_max + 1."""

    n_max: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


def default_cutoff(alpha_max: float) -> FockCutoff:
    """Cutoff rule n_max = ceil(|a|^2 + 8|a| + 10), floored at 16.

    Sized so the coherent tail beyond n_max is below 1e-12 for |alpha| <= 2.
    """
    a = abs(alpha_max)
    if not math.isfinite(a):
        raise ValueError("alpha_max must be finite")
    return FockCutoff(max(16, math.ceil(a * a + 8.0 * a + 10.0)))


def unitary_block_dim(cutoff: FockCutoff, alpha: complex) -> int:
    """Dimension of the leading block of D(alpha) that is unitary to 1e-8.

    A displaced number state |n> spreads up to roughly (sqrt(n) + |alpha|)^2
    photons, so truncation bites once that reaches n_max. The block edge
    b = (sqrt(n_max - 14) - |alpha|)^2 keeps the spread comfortably inside.
    """
    a = abs(alpha)
    base = cutoff.n_max - 14
    if base <= 0 or math.sqrt(base) <= a:
        return 1
    b = int(math.floor((math.sqrt(base) - a) ** 2))
    return min(b, cutoff.n_max) + 1


@dataclass(frozen=True)
class ModeOperator:
    """Complex matrix acting on a single truncated mode."""

    matrix: np.ndarray
    cutoff: FockCutoff

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.cutoff.dim, self.cutoff.dim):
            raise ValueError(f"matrix shape {m.shape} does not match cutoff dim {self.cutoff.dim}")
        object.__setattr__(self, "matrix", _frozen(m))

    def dagger(self) -> "ModeOperator":
        return ModeOperator(self.matrix.conj().T, self.cutoff)

    def __add__(self, other: "ModeOperator") -> "ModeOperator":
        _require_same_cutoff(self, other)
        return ModeOperator(self.matrix + other.matrix, self.cutoff)

    def __sub__(self, other: "ModeOperator") -> "ModeOperator":
        _require_same_cutoff(self, other)
        return ModeOperator(self.matrix - other.matrix, self.cutoff)

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        _require_same_cutoff(self, other)
        return ModeOperator(self.matrix @ other.matrix, self.cutoff)


@dataclass(frozen=True)
class TwoModeOperator:
    """Complex matrix on the two-mode product space, ordering (n_a, n_b), n_a slow."""

    matrix: np.ndarray
    cutoff: FockCutoff

    def __post_init__(self) -> None:
        d2 = self.cutoff.dim ** 2
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (d2, d2):
            raise ValueError(f"matrix shape {m.shape} does not match product dim {d2}")
        object.__setattr__(self, "matrix", _frozen(m))

    def dagger(self) -> "TwoModeOperator":
        return TwoModeOperator(self.matrix.conj().T, self.cutoff)

    def __add__(self, other: "TwoModeOperator") -> "TwoModeOperator":
        _require_same_cutoff(self, other)
        return TwoModeOperator(self.matrix + other.matrix, self.cutoff)

    def __sub__(self, other: "TwoModeOperator") -> "TwoModeOperator":
        _require_same_cutoff(self, other)
        return TwoModeOperator(self.matrix - other.matrix, self.cutoff)

    def __matmul__(self, other: "TwoModeOperator") -> "TwoModeOperator":
        _require_same_cutoff(self, other)
        return TwoModeOperator(self.matrix @ other.matrix, self.cutoff)


def _require_same_cutoff(a, b) -> None:
    if a.cutoff != b.cutoff:
        raise ValueError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")


@dataclass(frozen=True)
class TwoModeState:
    """Pure (amplitude tensor indexed (n_a, n_b)) or mixed (density matrix) state.

    Use :meth:`pure` / :meth:`mixed` instead of the raw constructor.
    """

    kind: str
    cutoff: FockCutoff
    amplitudes: np.ndarray | None = field(default=None)
    density: np.ndarray | None = field(default=None)

    @classmethod
    def pure(cls, amplitudes: np.ndarray, cutoff: FockCutoff) -> "TwoModeState":
        c = np.asarray(amplitudes, dtype=complex)
        if c.shape != (cutoff.dim, cutoff.dim):
            raise ValueError(f"amplitude tensor shape {c.shape} does not match cutoff dim {cutoff.dim}")
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > PURE_NORM_TOL:
            raise ValueError(f"pure state norm^2 = {norm2} deviates from 1 beyond {PURE_NORM_TOL}")
        return cls(kind="pure", cutoff=cutoff, amplitudes=_frozen(c))

    @classmethod
    def mixed(cls, density: np.ndarray, cutoff: FockCutoff) -> "TwoModeState":
        d2 = cutoff.dim ** 2
        rho = np.asarray(density, dtype=complex)
        if rho.shape != (d2, d2):
            raise ValueError(f"density shape {rho.shape} does not match product dim {d2}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > MIXED_TRACE_TOL:
            raise ValueError(f"density trace {tr} deviates from 1 beyond {MIXED_TRACE_TOL}")
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > 1e-10:
            raise ValueError(f"density deviates from Hermitian by {herm}")
        return cls(kind="mixed", cutoff=cutoff, density=_frozen(rho))

    def density_matrix(self) -> np.ndarray:
        """Density matrix on the product space for either kind."""
        if self.kind == "pure":
            v = self.amplitudes.reshape(-1)
            return np.outer(v, v.conj())
        return np.asarray(self.density)

    def check_positive(self, eigmin: float = PSD_EIGMIN) -> float:
        """Smallest eigenvalue of the density matrix; raises if below tolerance."""
        ev = float(np.linalg.eigvalsh(self.density_matrix())[0])
        if ev < eigmin:
            raise ValueError(f"density has eigenvalue {ev} below {eigmin}")
        return ev


def identity_matrix(cutoff: FockCutoff) -> ModeOperator:
    return ModeOperator(np.eye(cutoff.dim, dtype=complex), cutoff)


def number_matrix(cutoff: FockCutoff) -> ModeOperator:
    return ModeOperator(np.diag(np.arange(cutoff.dim).astype(complex)), cutoff)


def parity_matrix(cutoff: FockCutoff) -> ModeOperator:
    """Diagonal photon-number parity (-1)^n."""
    signs = np.where(np.arange(cutoff.dim) % 2 == 0, 1.0, -1.0).astype(complex)
    return ModeOperator(np.diag(signs), cutoff)


def displacement_matrix(alpha: complex, cutoff: FockCutoff) -> ModeOperator:
    """Truncated matrix of the coherent displacement D(alpha).

    Exact per-element closed form; unitarity holds on the leading
    :func:`unitary_block_dim` block, not across the whole truncated matrix.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ValueError(f"displacement amplitude must be finite, got {alpha!r}")
    dim = cutoff.dim
    if alpha == 0:
        return identity_matrix(cutoff)

    x = abs(alpha) ** 2
    log_abs = math.log(abs(alpha))
    phase = alpha / abs(alpha)
    lg = gammaln(np.arange(dim) + 1.0)

    D = np.zeros((dim, dim), dtype=complex)
    # Column n holds elements on and below the diagonal: offsets k = m - n.
    # The Laguerre recurrence runs over the degree n, vectorized across k.
    ks = np.arange(dim, dtype=float)
    phase_k = phase ** np.arange(dim)
    l_prev = np.ones(dim)                 # L_0^{(k)}(x)
    l_cur = 1.0 + ks - x                  # L_1^{(k)}(x)
    for n in range(dim):
        if n == 0:
            lag = l_prev
        elif n == 1:
            lag = l_cur
        else:
            l_next = ((2.0 * (n - 1) + 1.0 + ks - x) * l_cur - ((n - 1) + ks) * l_prev) / n
            l_prev, l_cur = l_cur, l_next
            lag = l_cur
        width = dim - n
        m = n + np.arange(width)
        log_pref = 0.5 * (lg[n] - lg[m]) + (m - n) * log_abs - 0.5 * x
        D[m, n] = np.exp(log_pref) * phase_k[:width] * lag[:width]
    iu = np.triu_indices(dim, k=1)
    signs = np.where((iu[1] - iu[0]) % 2 == 0, 1.0, -1.0)
    D[iu] = signs * np.conj(D[(iu[1], iu[0])])
    return ModeOperator(D, cutoff)


def tensor(a: ModeOperator, b: ModeOperator) -> TwoModeOperator:
    """Kronecker product with mode a as the slow index."""
    _require_same_cutoff(a, b)
    return TwoModeOperator(np.kron(a.matrix, b.matrix), a.cutoff)


def expectation(state: TwoModeState, obs: TwoModeOperator) -> complex:
    """<psi|O|psi> for pure states, Tr[rho O] for mixed ones."""
    _require_same_cutoff(state, obs)
    if state.kind == "pure":
        v = state.amplitudes.reshape(-1)
        return complex(np.vdot(v, obs.matrix @ v))
    return complex(np.einsum("ij,ji->", state.density, obs.matrix))


def expectation_product(state: TwoModeState, a_op: ModeOperator, b_op: ModeOperator) -> complex:
    """Expectation of the product observable A (x) B without forming the Kronecker matrix.

    Agrees with ``expectation(state, tensor(a_op, b_op))`` by the Kronecker
    mixed-product identity; used where many product expectations are needed.
    """
    _require_same_cutoff(state, a_op)
    _require_same_cutoff(a_op, b_op)
    A = a_op.matrix
    B = b_op.matrix
    if state.kind == "pure":
        C = state.amplitudes
        return complex(np.sum(C.conj() * (A @ C @ B.T)))
    d = state.cutoff.dim
    rho4 = state.density.reshape(d, d, d, d)
    return complex(np.einsum("abcd,ca,db->", rho4, A, B, optimize=True))


def _loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """Kraus operators K_k of the pure-loss channel with transmissivity eta."""
    ns = np.arange(dim, dtype=float)
    lg = gammaln(ns + 1.0)
    ops = []
    for k in range(dim):
        n = np.arange(k, dim)
        if eta == 0.0:
            amp = np.where(n == k, 1.0, 0.0)
        elif eta == 1.0:
            amp = np.where(n == k, 1.0, 0.0) if k == 0 else np.zeros(n.size)
        else:
            log_binom = lg[n] - lg[k] - lg[n - k]
            amp = np.exp(0.5 * (log_binom + (n - k) * math.log(eta) + k * math.log(1.0 - eta)))
        K = np.zeros((dim, dim), dtype=complex)
        K[n - k, n] = amp
        ops.append(K)
    return ops


def loss_channel(state: TwoModeState, eta_a: float, eta_b: float) -> TwoModeState:
    """Bosonic pure-loss channel with per-mode transmissivities, as a Kraus sum.

    Trace preserving on the truncated space because loss only lowers photon
    number. Returns the input unchanged when both transmissivities are 1.
    """
    for eta in (eta_a, eta_b):
        if not (0.0 <= eta <= 1.0):
            raise ValueError(f"transmissivity must lie in [0, 1], got {eta}")
    if eta_a == 1.0 and eta_b == 1.0:
        return state

    d = state.cutoff.dim
    rho4 = state.density_matrix().reshape(d, d, d, d)
    for mode, eta in ((0, eta_a), (1, eta_b)):
        if eta == 1.0:
            continue
        out = np.zeros_like(rho4)
        for K in _loss_kraus(eta, d):
            if mode == 0:
                # indices: rho4[ma, mb, na, nb], K acts on ma / na
                t = np.tensordot(K, rho4, axes=(1, 0))
                t = np.tensordot(t, K.conj(), axes=(2, 1))  # -> (ma, mb, nb, na)
                out += t.transpose(0, 1, 3, 2)
            else:
                t = np.tensordot(K, rho4, axes=(1, 1)).transpose(1, 0, 2, 3)
                t = np.tensordot(t, K.conj(), axes=(3, 1))  # -> (ma, mb, na, nb)
                out += t
        rho4 = out
    return TwoModeState.mixed(rho4.reshape(d * d, d * d), state.cutoff)
