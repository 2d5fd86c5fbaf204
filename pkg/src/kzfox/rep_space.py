"""Evaluation of free-algebra series on tuples of matrices and the induced
Poisson geometry of their matrix entries.

A point of the representation space is a tuple ``X = (X_1, ..., X_n)`` of
complex ``N x N`` matrices, one per generator.  Matrix entries of evaluated
series are then smooth functions on that space, and the linear
(Kirillov-Kostant-Souriau) Poisson structure induces a bracket on them.  This
module provides

* :func:`evaluate` -- truncated series evaluated on a matrix tuple,
* :func:`vdb_bracket` -- the entrywise bracket induced by a double bracket,
* :func:`kks_oracle` -- an independent finite-difference bracket oracle,
* :func:`bivector_pi` -- the bivector collecting the non-crossing terms of
  the loop-holonomy bracket formula,
* :func:`verify_theorem2` -- a three-way comparison (oracle / geometric
  crossing formula plus bivector / algebraic double bracket) for a pair of
  loop holonomies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .coefficients import r_am_series
from .errors import DomainError, ShapeError, ValidationError
from .fox_calculus import rho_kks
from .free_hopf import COMPLEX, FreeSeries, TensorSeries, Word
from .kz_holonomy import (
    DEFAULT_ACCURACY,
    DEFAULT_DELTA,
    ConnectionSpec,
    _base_linking,
    _require_tangential,
    holonomy_reg,
)
from .kz_paths import PLPath, intersections, subpath

__all__ = [
    "MatrixTuple",
    "BivectorPi",
    "BivectorReport",
    "evaluate",
    "tail_bound",
    "vdb_bracket",
    "kks_oracle",
    "bivector_pi",
    "verify_theorem2",
]

_FD_STEP = 1e-5


# ---------------------------------------------------------------------------
# matrix tuples
# ---------------------------------------------------------------------------
class MatrixTuple:
    """A tuple of complex N x N matrices, one per generator.

    The spectral-norm bound of the tuple is recorded on construction;
    evaluation of truncated series is trusted only when the bound is small
    relative to the truncation error budget (see :func:`tail_bound`).
    """

    __slots__ = ("matrices", "n", "N", "norm_bound")

    def __init__(self, matrices):
        mats = [np.asarray(M, dtype=complex) for M in matrices]
        if not mats:
            raise DomainError("matrix tuple must contain at least one matrix")
        N = mats[0].shape[0]
        for M in mats:
            if M.ndim != 2 or M.shape != (N, N):
                raise ShapeError("all matrices must be square of equal size")
            if not np.all(np.isfinite(M.view(float))):
                raise ValidationError("matrix entries must be finite")
        self.matrices = tuple(mats)
        self.n = len(mats)
        self.N = N
        self.norm_bound = max(
            float(np.linalg.norm(M, 2)) for M in mats
        )

    @classmethod
    def random(cls, n: int, N: int, radius: float = 0.1, seed: int = 0):
        """Random tuple with each spectral norm scaled to exactly ``radius``."""
        if radius <= 0:
            raise DomainError("radius must be positive")
        rng = np.random.default_rng(seed)
        mats = []
        for _ in range(n):
            M = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
            M *= radius / np.linalg.norm(M, 2)
            mats.append(M)
        return cls(mats)

    def shifted(self, gen: int, a: int, b: int, step: complex) -> "MatrixTuple":
        """Copy with ``step`` added to entry (a, b) of the matrix of
        generator ``gen`` (1-based)."""
        mats = [M.copy() for M in self.matrices]
        mats[gen - 1][a, b] += step
        return MatrixTuple(mats)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------
def _product_cache(mats) -> Callable[[Word], np.ndarray]:
    """Word-product evaluator sharing prefix products across words."""
    dim = mats[0].shape[0]
    memo: Dict[Word, np.ndarray] = {(): np.eye(dim, dtype=complex)}

    def product(w: Word) -> np.ndarray:
        M = memo.get(w)
        if M is None:
            M = product(w[:-1]) @ mats[w[-1] - 1]
            memo[w] = M
        return M

    return product


def evaluate(series: FreeSeries, X: MatrixTuple) -> np.ndarray:
    """Evaluate a truncated series on a matrix tuple.

    Returns ``sum_w c_w X_{w_1} ... X_{w_k}`` with prefix products shared
    across words.  The truncation tail is not included; use
    :func:`tail_bound` for the geometric advisory bound.
    """
    if series.backend != COMPLEX:
        raise DomainError("evaluation requires the float backend")
    if series.n != X.n:
        raise ShapeError("series and matrix tuple have different generator counts")
    product = _product_cache(X.matrices)
    out = np.zeros((X.N, X.N), dtype=complex)
    for w, c in series.coeffs.items():
        out += complex(c) * product(w)
    return out


def tail_bound(degree: int, X: MatrixTuple) -> float:
    """Geometric estimate of the discarded tail: sum over word lengths
    ``k > degree`` of ``(n * ||X||)^k``.  Advisory only (assumes order-one
    coefficients)."""
    r = X.n * X.norm_bound
    if r >= 1.0:
        return float("inf")
    return r ** (degree + 1) / (1.0 - r)


# ---------------------------------------------------------------------------
# entrywise bracket induced by a double bracket
# ---------------------------------------------------------------------------
def vdb_bracket(
    db: TensorSeries, X: MatrixTuple, i: int, j: int, u: int, v: int
) -> complex:
    """Bracket of matrix entries induced by a double bracket:
    ``{a_ij, b_uv} = (db)'_{uj} (db)''_{iv}`` with ``db = {{a, b}}``,
    each tensor leg evaluated on ``X``."""
    N = X.N
    for idx in (i, j, u, v):
        if not 0 <= idx < N:
            raise DomainError("matrix entry index out of range")
    product = _product_cache(X.matrices)
    total = 0j
    for (w1, w2), c in db.coeffs.items():
        total += complex(c) * product(w1)[u, j] * product(w2)[i, v]
    return total


def _tensor_eval(db: TensorSeries, X: MatrixTuple) -> np.ndarray:
    """All entry brackets at once: ``out[i, j, u, v] = vdb_bracket(db, X,
    i, j, u, v)``."""
    N = X.N
    product = _product_cache(X.matrices)
    out = np.zeros((N, N, N, N), dtype=complex)
    for (w1, w2), c in db.coeffs.items():
        # out[i, j, u, v] += c * P1[u, j] * P2[i, v]
        out += complex(c) * np.einsum("uj,iv->ijuv", product(w1), product(w2))
    return out


# ---------------------------------------------------------------------------
# finite-difference gradients and the bracket oracle
# ---------------------------------------------------------------------------
def _matrix_gradient(
    matfun: Callable[[MatrixTuple], np.ndarray],
    X: MatrixTuple,
    step: float = _FD_STEP,
) -> np.ndarray:
    """Gradient tensor of a matrix-valued function of the tuple:
    ``grad[l, a, b, i, j] = d matfun(X)[i, j] / d (X_{l+1})_{ab}``,
    by Richardson-improved central differences (entries are holomorphic
    polynomials, so a real step computes the complex derivative)."""
    n, N = X.n, X.N
    grad = np.empty((n, N, N, N, N), dtype=complex)
    for l in range(n):
        for a in range(N):
            for b in range(N):
                d_full = (
                    matfun(X.shifted(l + 1, a, b, step))
                    - matfun(X.shifted(l + 1, a, b, -step))
                ) / (2.0 * step)
                d_half = (
                    matfun(X.shifted(l + 1, a, b, 0.5 * step))
                    - matfun(X.shifted(l + 1, a, b, -0.5 * step))
                ) / step
                grad[l, a, b] = (4.0 * d_half - d_full) / 3.0
    return grad


def _scalar_gradient(
    F: Callable[[MatrixTuple], complex], X: MatrixTuple, step: float
) -> np.ndarray:
    """``grad[l, a, b] = dF/d(X_{l+1})_{ab}`` by the same scheme."""
    n, N = X.n, X.N
    grad = np.empty((n, N, N), dtype=complex)
    for l in range(n):
        for a in range(N):
            for b in range(N):
                d_full = (
                    F(X.shifted(l + 1, a, b, step))
                    - F(X.shifted(l + 1, a, b, -step))
                ) / (2.0 * step)
                d_half = (
                    F(X.shifted(l + 1, a, b, 0.5 * step))
                    - F(X.shifted(l + 1, a, b, -0.5 * step))
                ) / step
                grad[l, a, b] = (4.0 * d_half - d_full) / 3.0
    return grad


def kks_oracle(
    F: Callable[[MatrixTuple], complex],
    G: Callable[[MatrixTuple], complex],
    X: MatrixTuple,
    step: float = _FD_STEP,
) -> complex:
    """Linear Poisson bracket of two scalar functions of the matrix tuple,
    computed from finite-difference matrix gradients:

    ``{F, G}(X) = sum_l tr(X_l [grad_l G, grad_l F])`` with
    ``(grad_l F)_{ba} = dF/d(X_l)_{ab}``.

    The orientation is fixed by the coordinate bracket
    ``{(x_a)_{ij}, (x_a)_{kl}} = d_{jk} (x_a)_{il} - d_{il} (x_a)_{kj}``.
    """
    gF = _scalar_gradient(F, X, step)
    gG = _scalar_gradient(G, X, step)
    total = 0j
    for l in range(X.n):
        nF = gF[l].T
        nG = gG[l].T
        total += np.trace(X.matrices[l] @ (nG @ nF - nF @ nG))
    return complex(total)


def _oracle_tensor(gF: np.ndarray, gG: np.ndarray, X: MatrixTuple) -> np.ndarray:
    """Batched oracle over all entry pairs, from matrix-gradient tensors
    produced by :func:`_matrix_gradient`:
    ``out[i, j, u, v] = {F_ij, G_uv}`` with the orientation of
    :func:`kks_oracle`."""
    N = X.N
    out = np.zeros((N, N, N, N), dtype=complex)
    for l in range(X.n):
        Xl = X.matrices[l]
        # (grad_l F_ij)[b, a] = gF[l, a, b, i, j]
        # tr(X P Q) = X[p, q] P[q, r] Q[r, p]
        # with P = grad G_uv, Q = grad F_ij:
        t1 = np.einsum("pq,rquv,prij->ijuv", Xl, gG[l], gF[l])
        t2 = np.einsum("pq,rqij,pruv->ijuv", Xl, gF[l], gG[l])
        out += t1 - t2
    return out


# ---------------------------------------------------------------------------
# the bivector
# ---------------------------------------------------------------------------
def _r_am_coefficients(degree: int) -> Dict[int, complex]:
    """Scalar Taylor coefficients of the even-odd regularization series,
    keyed by power, through ``degree``."""
    one_var = r_am_series(1, degree, 1, COMPLEX)
    return {len(w): complex(c) for w, c in one_var.coeffs.items()}


def _adjoint_operator(M: np.ndarray) -> np.ndarray:
    """``ad_M`` on N x N matrices as an ``N^2 x N^2`` matrix acting on
    row-major vectorizations."""
    N = M.shape[0]
    eye = np.eye(N)
    return np.kron(M, eye) - np.kron(eye, M.T)


class BivectorPi:
    """The bivector collecting the non-crossing contributions to the bracket
    of two loop-holonomy entries based at the puncture of generator ``m``.

    It is the biderivation whose values on coordinate pairs are

    * inner part: ``([X_a, R([X_b, E_vu])])_ij`` for
      ``((x_a)_ij, (x_b)_uv)``, with ``R`` the regularization series of the
      adjoint operator of ``X_m`` truncated at ``degree``;
    * left/right parts: ``d_am (d_uj (X_b)_iv - (X_b)_uj d_iv)`` plus
      ``d_bm (d_uj (X_a)_iv - (X_a)_uj d_iv)``.

    General functions are paired through their finite-difference gradients.
    """

    def __init__(self, X: MatrixTuple, m: int, degree: int, step: float = _FD_STEP):
        if not 1 <= m <= X.n:
            raise DomainError("generator index out of range")
        self.X = X
        self.m = m
        self.degree = degree
        self.step = step
        n, N = X.n, X.N
        coeffs = _r_am_coefficients(degree)
        ad = _adjoint_operator(X.matrices[m - 1])
        R = np.zeros((N * N, N * N), dtype=complex)
        power = np.eye(N * N, dtype=complex)
        for k in range(degree + 1):
            c = coeffs.get(k)
            if c is not None:
                R += c * power
            power = power @ ad
        self._r_op = R
        # inner core[c, k, l, d, w, z] = ([X_c, R([X_d, E_zw])])_{kl}
        core = np.zeros((n, N, N, n, N, N), dtype=complex)
        E = np.zeros((N, N), dtype=complex)
        for d in range(n):
            Xd = X.matrices[d]
            for w in range(N):
                for z in range(N):
                    E[z, w] = 1.0
                    B = Xd @ E - E @ Xd
                    E[z, w] = 0.0
                    RB = (R @ B.reshape(-1)).reshape(N, N)
                    for c in range(n):
                        Xc = X.matrices[c]
                        core[c, :, :, d, w, z] = Xc @ RB - RB @ Xc
        self._core_inner = core
        # wedge core (left + right parts)
        wedge = np.zeros((n, N, N, n, N, N), dtype=complex)
        eye = np.eye(N)
        for d in range(n):
            Xd = X.matrices[d]
            # left part: F-direction on generator m, any G-direction d
            wedge[m - 1, :, :, d, :, :] += np.einsum(
                "wl,kz->klwz", eye, Xd
            ) - np.einsum("wl,kz->klwz", Xd, eye)
        for c in range(n):
            Xc = X.matrices[c]
            # right part: G-direction on generator m, any F-direction c
            wedge[c, :, :, m - 1, :, :] += np.einsum(
                "wl,kz->klwz", eye, Xc
            ) - np.einsum("wl,kz->klwz", Xc, eye)
        self._core_wedge = wedge

    # -- pairing ------------------------------------------------------------
    def pair_gradients(self, gF: np.ndarray, gG: np.ndarray) -> np.ndarray:
        """Pair two matrix-gradient tensors (from :func:`_matrix_gradient`):
        returns ``out[i, j, u, v] = Pi(F_ij, G_uv)``."""
        core = self._core_inner + self._core_wedge
        return np.einsum("cklij,ckldwz,dwzuv->ijuv", gF, core, gG)

    def __call__(
        self,
        F: Callable[[MatrixTuple], complex],
        G: Callable[[MatrixTuple], complex],
    ) -> complex:
        """Pair two scalar evaluators through finite-difference gradients."""
        gF = _scalar_gradient(F, self.X, self.step)
        gG = _scalar_gradient(G, self.X, self.step)
        core = self._core_inner + self._core_wedge
        return complex(np.einsum("ckl,ckldwz,dwz->", gF, core, gG))

    def wedge_part(
        self,
        F: Callable[[MatrixTuple], complex],
        G: Callable[[MatrixTuple], complex],
    ) -> complex:
        """Only the left-plus-right (wedge) part of the pairing."""
        gF = _scalar_gradient(F, self.X, self.step)
        gG = _scalar_gradient(G, self.X, self.step)
        return complex(np.einsum("ckl,ckldwz,dwz->", gF, self._core_wedge, gG))

    def gl_action(self, F: Callable[[MatrixTuple], complex]) -> np.ndarray:
        """The diagonal matrix-algebra action on a scalar function:
        ``out[a, b] = sum_{l, c} (X_l)_{ac} dF/d(X_l)_{cb}
        - (X_l)_{cb} dF/d(X_l)_{ac}``."""
        gF = _scalar_gradient(F, self.X, self.step)
        out = np.zeros((self.X.N, self.X.N), dtype=complex)
        for l in range(self.X.n):
            Xl = self.X.matrices[l]
            out += Xl @ gF[l] - gF[l] @ Xl
        return out


def bivector_pi(X: MatrixTuple, m: int, degree: int = 16) -> BivectorPi:
    """Materialize the bivector pairing for loops based at the puncture of
    generator ``m`` (1-based); the adjoint-operator series is truncated at
    ``degree``."""
    return BivectorPi(X, m, degree)


# ---------------------------------------------------------------------------
# double bracket of grouplike series, evaluated
# ---------------------------------------------------------------------------
def _grouplike_double_bracket_tensor(
    a: FreeSeries, b: FreeSeries, X: MatrixTuple
) -> np.ndarray:
    """Entry brackets ``out[i, j, u, v] = {a_ij, b_uv}`` induced by the
    adjacent-letter double bracket, for (numerically) grouplike ``a, b``.

    For grouplike arguments the double bracket collapses to a single
    Sweedler term ``b S(r') a (x) r''`` with ``r`` the adjacent-letter
    pairing of ``a`` and ``b``; the two legs of ``(S (x) id) Delta(r)`` are
    evaluated jointly in the product representation
    ``x_i -> (-X_i^T) (x) I + I (x) X_i``.
    """
    N = X.N
    eye = np.eye(N)
    r = rho_kks(a, b)
    big = [
        np.kron(-M.T, eye) + np.kron(eye, M) for M in X.matrices
    ]
    product = _product_cache(big)
    W = np.zeros((N * N, N * N), dtype=complex)
    for w, c in r.coeffs.items():
        W += complex(c) * product(w)
    # np.kron row/column index interleaving: W4[p, q, r, s] =
    # (eval S(r'))^T[p, r] * (eval r'')[q, s]
    W4 = W.reshape(N, N, N, N)
    K = W4.transpose(2, 0, 1, 3)  # K[al, be, ga, de] = S-leg[al, be] * leg[ga, de]
    Ma = evaluate(a, X)
    Mb = evaluate(b, X)
    # left leg of {{a, b}} is b S(r') a; contraction (')_{uj} ('')_{iv}
    left = np.einsum("ua,abgd,bj->ujgd", Mb, K, Ma)
    return left.transpose(2, 1, 0, 3)  # out[i, j, u, v] = left[u, j, i, v]


# ---------------------------------------------------------------------------
# three-way verification for loop pairs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BivectorReport:
    """Three-way comparison of the bracket of two loop-holonomy entry
    matrices; tensors are indexed ``[i, j, u, v]`` for the bracket of entry
    ``(i, j)`` of the first holonomy with entry ``(u, v)`` of the second."""

    lhs_oracle: np.ndarray
    rhs_formula: np.ndarray
    vdb: np.ndarray
    crossing_part: np.ndarray
    pi_part: np.ndarray
    n_crossings: int
    base_linking: float
    tail: float
    tolerance: float

    @property
    def max_disc(self) -> Dict[str, float]:
        return {
            "oracle_vs_formula": float(
                np.max(np.abs(self.lhs_oracle - self.rhs_formula))
            ),
            "oracle_vs_vdb": float(np.max(np.abs(self.lhs_oracle - self.vdb))),
            "formula_vs_vdb": float(np.max(np.abs(self.rhs_formula - self.vdb))),
        }

    @property
    def max_discrepancy(self) -> float:
        return max(self.max_disc.values())

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance

    def trace_bracket(self) -> complex:
        """Bracket of the two trace functions, from the oracle tensor."""
        return complex(np.einsum("iiuu->", self.lhs_oracle))

    def trace_crossing(self) -> complex:
        """Crossing-term contribution to the trace bracket."""
        return complex(np.einsum("iiuu->", self.crossing_part))

    def trace_pi(self) -> complex:
        """Bivector contribution to the trace bracket (vanishes for
        invariant functions)."""
        return complex(np.einsum("iiuu->", self.pi_part))

    def to_json_dict(self) -> dict:
        return {
            "lhs_oracle": float(np.max(np.abs(self.lhs_oracle))),
            "rhs_formula": float(np.max(np.abs(self.rhs_formula))),
            "vdb": float(np.max(np.abs(self.vdb))),
            "max_disc": self.max_disc,
            "tail_bound": self.tail,
            "tolerance": self.tolerance,
            "n_crossings": self.n_crossings,
            "base_linking": self.base_linking,
            "trace_pi_contribution": abs(self.trace_pi()),
            "passed": self.passed,
        }


def verify_theorem2(
    conn: ConnectionSpec,
    loop2: PLPath,
    loop1: PLPath,
    X: MatrixTuple,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
    tolerance_floor: float = 1e-4,
) -> BivectorReport:
    """Three-way check of the loop-holonomy bracket formula.

    Computes the bracket tensor ``{(H2)_ij, (H1)_uv}`` of the two loop
    holonomies three ways: (i) the finite-difference oracle on evaluated
    entries, (ii) the geometric formula (signed crossing subholonomies plus
    the bivector), (iii) the evaluated double bracket of the two grouplike
    holonomies.  The tolerance is ``max(tolerance_floor, tail_bound)``; the
    geometric value (ii) assumes a loop pair whose strands at the base
    resolve without extra linking corrections (``base_linking == 0``).
    """
    m = _require_tangential(loop1, "start")
    for path, which in ((loop1, "end"), (loop2, "start"), (loop2, "end")):
        if _require_tangential(path, which) != m:
            raise ValidationError("both loops must share one tangential base point")
    if conn.n_generators != X.n:
        raise ShapeError("connection and matrix tuple have different generator counts")
    h1 = holonomy_reg(conn, loop1, accuracy, delta).series
    h2 = holonomy_reg(conn, loop2, accuracy, delta).series
    M1 = evaluate(h1, X)
    M2 = evaluate(h2, X)

    # (i) finite-difference oracle on all entry pairs
    g2 = _matrix_gradient(lambda Y: evaluate(h2, Y), X)
    g1 = _matrix_gradient(lambda Y: evaluate(h1, Y), X)
    oracle = _oracle_tensor(g2, g1, X)

    # (ii) crossing subholonomies plus the bivector
    N = X.N
    crossing = np.zeros((N, N, N, N), dtype=complex)
    cuts = intersections(loop1, loop2)
    for c in cuts:
        front1 = holonomy_reg(conn, subpath(loop1, c.t, 1.0), accuracy, delta).series
        back1 = holonomy_reg(conn, subpath(loop1, 0.0, c.t), accuracy, delta).series
        front2 = holonomy_reg(conn, subpath(loop2, c.s, 1.0), accuracy, delta).series
        back2 = holonomy_reg(conn, subpath(loop2, 0.0, c.s), accuracy, delta).series
        t_a = evaluate(front1, X) @ evaluate(back2, X)
        t_b = evaluate(front2, X) @ evaluate(back1, X)
        crossing += float(c.sign) * np.einsum("uj,iv->ijuv", t_a, t_b)
    base = _base_linking(loop1, loop2)
    if base:
        # the closing tails of the two loops cross at the base itself
        crossing += base * np.einsum("uj,iv->ijuv", M1, M2)
    pi = bivector_pi(X, m, conn.trunc_degree).pair_gradients(g2, g1)
    formula = crossing + pi

    # (iii) evaluated double bracket of the grouplike holonomies
    vdb = _grouplike_double_bracket_tensor(h2, h1, X)

    tail = tail_bound(conn.trunc_degree, X)
    return BivectorReport(
        lhs_oracle=oracle,
        rhs_formula=formula,
        vdb=vdb,
        crossing_part=crossing,
        pi_part=pi,
        n_crossings=len(cuts),
        base_linking=base,
        tail=tail,
        tolerance=max(tolerance_floor, tail),
    )
