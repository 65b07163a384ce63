"""Open-system dynamics of N two-level emitters coupled through the interface.

The density matrix evolves under a Lindblad-like generator whose dissipator
carries the full asymmetric rate matrix Gamma_ij: for i != j the cross terms
enter through the complex coefficients nu_ij = Gamma_ij / 2 + i g_ij, so the
forward and backward pathways can differ over a biased interface.  Work in
the frame rotating at the transition frequency, where the coherent part
reduces to the exchange Hamiltonian sum_{i != j} g_ij sigma_i^+ sigma_j^-.

Two closed-form solutions for the reciprocal and the fully one-way pair are
kept alongside as independent cross-checks, together with a hand-expanded
16-equation form of the two-emitter generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .couplings import CouplingSet
from .errors import DomainError, StiffnessError

_TRACE_TOL = 1e-9
_PSD_TOL = 1e-9


@dataclass(frozen=True)
class DensityMatrix:
    """Validated N-emitter density matrix in the product basis.

    The basis orders emitter 1 as the most significant qubit, with |g> = 0
    and |e> = 1 per emitter, so index b = sum_i n_i 2^(N-1-i).
    """

    rho: np.ndarray
    n_emitters: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        dim = 2**self.n_emitters
        if rho.shape != (dim, dim):
            raise DomainError(
                f"density matrix must be {dim}x{dim} for {self.n_emitters} emitters")
        if abs(np.trace(rho).real - 1.0) > _TRACE_TOL or abs(np.trace(rho).imag) > _TRACE_TOL:
            raise DomainError(f"trace must be 1, got {np.trace(rho)}")
        if np.max(np.abs(rho - rho.conj().T)) > _PSD_TOL:
            raise DomainError("density matrix must be Hermitian")
        evals = np.linalg.eigvalsh(rho)
        if evals.min() < -_PSD_TOL:
            raise DomainError(f"density matrix must be PSD, min eigenvalue {evals.min()}")
        object.__setattr__(self, "rho", rho)

    def population(self, i: int) -> float:
        """Excited-state population <sigma_i^+ sigma_i^-> (1-based emitter)."""
        n = number_operator(self.n_emitters, i)
        return float(np.trace(n @ self.rho).real)


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory of the density matrix on the requested time grid."""

    times: np.ndarray
    states: np.ndarray  # (n_times, dim, dim)
    n_emitters: int

    def populations(self, i: int) -> np.ndarray:
        n = number_operator(self.n_emitters, i)
        return np.einsum("ij,tji->t", n, self.states).real

    def state(self, idx: int) -> DensityMatrix:
        return DensityMatrix(rho=self.states[idx], n_emitters=self.n_emitters)


def _single_site(op: np.ndarray, n: int, i: int) -> np.ndarray:
    """Embed a single-qubit operator on emitter i (1-based) in the N-qubit space."""
    if not 1 <= i <= n:
        raise DomainError(f"emitter index {i} outside 1..{n}")
    out = np.array([[1.0]])
    sigma_id = np.eye(2)
    for site in range(1, n + 1):
        out = np.kron(out, op if site == i else sigma_id)
    return out


def lowering_operator(n: int, i: int) -> np.ndarray:
    """sigma_i^- = |g><e| on emitter i, identity elsewhere."""
    return _single_site(np.array([[0.0, 1.0], [0.0, 0.0]]), n, i)


def number_operator(n: int, i: int) -> np.ndarray:
    """sigma_i^+ sigma_i^- on emitter i."""
    return _single_site(np.array([[0.0, 0.0], [0.0, 1.0]]), n, i)


def initial_state(n_emitters: int, kind: str = "excited_first",
                  rho: Optional[np.ndarray] = None) -> DensityMatrix:
    """Common initial conditions for transport runs.

    ``excited_first`` puts emitter 1 in |e> and the rest in |g>;
    ``bell_plus`` is the symmetric single-excitation state of emitters 1, 2;
    ``ground`` is all-ground; ``custom`` validates the supplied matrix.
    """
    dim = 2**n_emitters
    if kind == "custom":
        if rho is None:
            raise DomainError("custom initial state needs an explicit matrix")
        return DensityMatrix(rho=np.asarray(rho, dtype=complex), n_emitters=n_emitters)
    psi = np.zeros(dim, dtype=complex)
    if kind == "ground":
        psi[0] = 1.0
    elif kind == "excited_first":
        psi[1 << (n_emitters - 1)] = 1.0
    elif kind == "bell_plus":
        if n_emitters < 2:
            raise DomainError("bell_plus needs at least two emitters")
        psi[1 << (n_emitters - 1)] = 1.0 / math.sqrt(2.0)
        psi[1 << (n_emitters - 2)] = 1.0 / math.sqrt(2.0)
    else:
        raise DomainError(f"unknown initial state kind {kind!r}")
    return DensityMatrix(rho=np.outer(psi, psi.conj()), n_emitters=n_emitters)


def build_liouvillian(cset: CouplingSet) -> Callable[[np.ndarray], np.ndarray]:
    """Right-hand side rho -> d rho / dt for the N-emitter master equation.

    Diagonal terms are standard Lindblad decay at Gamma_ii; each ordered
    off-diagonal pair contributes

        conj(nu_ij) (sigma_j rho sigma_i^+ - sigma_i^+ sigma_j rho)
        + nu_ij     (sigma_i rho sigma_j^+ - rho sigma_j^+ sigma_i)

    with nu_ij = Gamma_ij / 2 + i g_ij, which folds the coherent exchange
    g_ij and the dissipative cross-rate Gamma_ij into one coefficient and
    keeps rho Hermitian for any asymmetric rate matrix.  The pump acts on
    emitter 1 as inverted decay at gamma_in; the extraction adds decay
    gamma_out on emitter N.
    """
    n = cset.n
    sm = [lowering_operator(n, i + 1) for i in range(n)]
    sp = [s.conj().T for s in sm]
    gamma = cset.gamma
    g = cset.g

    # precompute the operator products that appear linearly in rho
    left = np.zeros_like(sm[0])   # multiplies rho from the left
    right = np.zeros_like(sm[0])  # multiplies rho from the right
    jump = []                     # (coefficient, A, B) for A rho B terms
    for i in range(n):
        left = left - 0.5 * gamma[i, i] * (sp[i] @ sm[i])
        right = right - 0.5 * gamma[i, i] * (sp[i] @ sm[i])
        jump.append((gamma[i, i], sm[i], sp[i]))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            nu = gamma[i, j] / 2.0 + 1j * g[i, j]
            left = left - np.conj(nu) * (sp[i] @ sm[j])
            right = right - nu * (sp[j] @ sm[i])
            jump.append((np.conj(nu), sm[j], sp[i]))
            jump.append((nu, sm[i], sp[j]))
    if cset.gamma_in > 0:
        gin = cset.gamma_in
        left = left - 0.5 * gin * (sm[0] @ sp[0])
        right = right - 0.5 * gin * (sm[0] @ sp[0])
        jump.append((gin, sp[0], sm[0]))
    if cset.gamma_out > 0:
        gout = cset.gamma_out
        left = left - 0.5 * gout * (sp[-1] @ sm[-1])
        right = right - 0.5 * gout * (sp[-1] @ sm[-1])
        jump.append((gout, sm[-1], sp[-1]))

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = left @ rho + rho @ right
        for coef, a, b in jump:
            out = out + coef * (a @ rho @ b)
        return out

    return rhs


def generator_matrix(cset: CouplingSet) -> np.ndarray:
    """The same generator as a dense dim^2 x dim^2 matrix on vec(rho).

    Column-stacking convention: vec(A rho B) = (B^T kron A) vec(rho).
    """
    rhs = build_liouvillian(cset)
    dim = 2**cset.n
    gen = np.zeros((dim * dim, dim * dim), dtype=complex)
    basis = np.zeros((dim, dim), dtype=complex)
    for col in range(dim * dim):
        basis.flat[col] = 1.0
        gen[:, col] = rhs(basis).reshape(-1)
        basis.flat[col] = 0.0
    return gen


def evolve(cset: CouplingSet, rho0: DensityMatrix, times,
           rtol: float = 1e-8, atol: float = 1e-10) -> EvolutionResult:
    """Integrate the master equation over the given time grid (RK45).

    Step-size underflow surfaces as StiffnessError with the time reached.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2 or np.any(np.diff(times) <= 0):
        raise DomainError("times must be a strictly increasing 1D grid")
    if rho0.n_emitters != cset.n:
        raise DomainError("initial state and coupling set disagree on emitter count")
    rhs = build_liouvillian(cset)
    dim = 2**cset.n

    def f(_t, y):
        rho = y.reshape(dim, dim)
        return rhs(rho).reshape(-1)

    sol = solve_ivp(f, (times[0], times[-1]), rho0.rho.reshape(-1).astype(complex),
                    t_eval=times, method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise StiffnessError(
            f"master-equation integration failed: {sol.message}",
            t_reached=float(sol.t[-1]) if sol.t.size else float(times[0]))
    states = sol.y.T.reshape(len(times), dim, dim)
    return EvolutionResult(times=times, states=states, n_emitters=cset.n)


def oracle_reciprocal(cset: CouplingSet, times) -> np.ndarray:
    """Closed-form populations for a symmetric pair, emitter 1 excited.

    With Gamma_12 = Gamma_21 and g_12 = g_21 the single-excitation sector
    splits into super/subradiant channels:

        P_1,2(t) = (1/4)[e^{-(G + G12) t} + e^{-(G - G12) t}]
                   +/- (1/2) e^{-G t} cos(2 g12 t).

    Returns an array of shape (n_times, 2).  Only valid when |Gamma_12| is
    at most Gamma_11 (otherwise a channel rate would turn negative).
    """
    if cset.n != 2:
        raise DomainError("reciprocal oracle is for two emitters")
    if cset.gamma_in != 0 or cset.gamma_out != 0:
        raise DomainError("reciprocal oracle assumes no pump or extraction")
    gam, g = cset.gamma, cset.g
    if not (np.isclose(gam[0, 1], gam[1, 0]) and np.isclose(g[0, 1], g[1, 0])):
        raise DomainError("reciprocal oracle needs symmetric rate matrices")
    if not np.isclose(gam[0, 0], gam[1, 1]):
        raise DomainError("reciprocal oracle needs equal on-site rates")
    G, G12, g12 = gam[0, 0], gam[0, 1], g[0, 1]
    if abs(G12) > G:
        raise DomainError("|Gamma_12| > Gamma_11: channel rate would be negative")
    t = np.asarray(times, dtype=float)
    sym = 0.25 * (np.exp(-(G + G12) * t) + np.exp(-(G - G12) * t))
    osc = 0.5 * np.exp(-G * t) * np.cos(2.0 * g12 * t)
    return np.column_stack([sym + osc, sym - osc])


def oracle_nonreciprocal(cset: CouplingSet, times) -> np.ndarray:
    """Closed-form populations for a fully one-way pair, emitter 1 excited.

    When the 2 -> 1 back-action vanishes (Gamma_12 = g_12 = 0) the cascade
    solves exactly:

        P_1(t) = e^{-G t},
        P_2(t) = |Gamma_21 / 2 + i g_21|^2 t^2 e^{-G t}.

    P_2 peaks at t = 2 / G with value 4 |nu|^2 e^{-2} / G^2, which reaches 1
    exactly on the nonreciprocal bound |nu| = e G / 2.
    """
    if cset.n != 2:
        raise DomainError("nonreciprocal oracle is for two emitters")
    if cset.gamma_in != 0 or cset.gamma_out != 0:
        raise DomainError("nonreciprocal oracle assumes no pump or extraction")
    gam, g = cset.gamma, cset.g
    if not (np.isclose(gam[0, 1], 0.0) and np.isclose(g[0, 1], 0.0)):
        raise DomainError("nonreciprocal oracle needs vanishing 2 -> 1 back-action")
    if not np.isclose(gam[0, 0], gam[1, 1]):
        raise DomainError("nonreciprocal oracle needs equal on-site rates")
    G = gam[0, 0]
    nu = gam[1, 0] / 2.0 + 1j * g[1, 0]
    t = np.asarray(times, dtype=float)
    p1 = np.exp(-G * t)
    p2 = np.abs(nu) ** 2 * t**2 * np.exp(-G * t)
    return np.column_stack([p1, p2])


def ode_rhs_two_atom(cset: CouplingSet, rho: np.ndarray) -> np.ndarray:
    """Hand-expanded two-emitter generator, written equation by equation.

    Independent transcription of the master equation in the level basis
    {1 = gg, 2 = ee, 3 = ge, 4 = eg}, used to cross-check the operator
    construction.  gamma = Gamma_21 / 2 + i g_21 mediates 1 -> 2 transfer
    and nu = Gamma_12 / 2 + i g_12 the 2 -> 1 back-action.  Both on-site
    rates equal Gamma_11 in this form.  Input and output use the same
    product-basis ordering as the operator path.
    """
    if cset.n != 2:
        raise DomainError("two-atom form needs a two-emitter coupling set")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("two-atom form expects a 4x4 density matrix")
    if not np.isclose(cset.gamma[0, 0], cset.gamma[1, 1]):
        raise DomainError("two-atom form assumes equal on-site rates")
    G = cset.gamma[0, 0]
    gam = cset.gamma[1, 0] / 2.0 + 1j * cset.g[1, 0]
    nu = cset.gamma[0, 1] / 2.0 + 1j * cset.g[0, 1]
    gc = np.conj(gam)
    nc = np.conj(nu)
    gin = cset.gamma_in
    gout = cset.gamma_out

    # map the computational order {gg, ge, eg, ee} to the level order
    perm = np.array([0, 3, 1, 2])
    r = rho[np.ix_(perm, perm)]
    d = np.empty((4, 4), dtype=complex)

    d[0, 0] = (G * r[3, 3] + (G + gout) * r[2, 2] + gam * r[2, 3] + gc * r[3, 2]
               - gin * r[0, 0] + nu * r[3, 2] + nc * r[2, 3])
    d[0, 1] = -0.5 * r[0, 1] * (2 * G + gout + gin)
    d[0, 2] = (G * r[3, 1] - 0.5 * r[0, 2] * (G + gout)
               + gam * (r[2, 1] - r[0, 3]) - gin * r[0, 2] + nc * r[2, 1])
    d[0, 3] = (-0.5 * G * r[0, 3] + r[2, 1] * (G + gout) + gc * r[3, 1]
               - 0.5 * gin * r[0, 3] + nu * (r[3, 1] - r[0, 2]))
    d[1, 0] = -0.5 * r[1, 0] * (2 * G + gout + gin)
    d[1, 1] = -r[1, 1] * (2 * G + gout) + gin * r[2, 2]
    d[1, 2] = -r[1, 2] * (1.5 * G + gout + 0.5 * gin) - gam * r[1, 3]
    d[1, 3] = -r[1, 3] * (1.5 * G + 0.5 * gout) + gin * r[2, 0] - nu * r[1, 2]
    d[2, 0] = (G * r[1, 3] - 0.5 * r[2, 0] * (G + gout)
               + gc * (r[1, 2] - r[3, 0]) - gin * r[2, 0] + nu * r[1, 2])
    d[2, 1] = -r[2, 1] * (1.5 * G + gout + 0.5 * gin) - gc * r[3, 1]
    d[2, 2] = (G * r[1, 1] - r[2, 2] * (G + gout + gin)
               - gam * r[2, 3] - gc * r[3, 2])
    d[2, 3] = (-0.5 * r[2, 3] * (2 * G + gout + gin)
               + gc * (r[1, 1] - r[3, 3]) + nu * (r[1, 1] - r[2, 2]))
    d[3, 0] = (-0.5 * G * r[3, 0] + r[1, 2] * (G + gout) + gam * r[1, 3]
               - 0.5 * gin * r[3, 0] + nc * (r[1, 3] - r[2, 0]))
    d[3, 1] = -0.5 * r[3, 1] * (3 * G + gout) + gin * r[0, 2] - nc * r[2, 1]
    d[3, 2] = (-0.5 * r[3, 2] * (2 * G + gout + gin)
               + gam * (r[1, 1] - r[3, 3]) + nc * (r[1, 1] - r[2, 2]))
    d[3, 3] = (-G * r[3, 3] + r[1, 1] * (G + gout) + gin * r[0, 0]
               - nu * r[3, 2] - nc * r[2, 3])

    inv = np.argsort(perm)
    return d[np.ix_(inv, inv)]
