"""Structural analysis and attack-cost estimation for the two schemes.

Three toolboxes share this module. The distinguisher machinery works on
block codes over F_q whose columns come in m-blocks: raising each m x m
block of a block-information-set generator to the q^s-th matrix power sends
an expanded code to the expansion of its parent's Frobenius image, so the
dimension of C + C^(1) grows like (k+1)m for expanded Gabidulin codes and
like 2km for random ones. The MinRank toolbox reshapes ciphertexts into the
small-rank matrix problem that decoding attacks solve, plus a desk-scale
exhaustive solver to validate the reduction. The estimator toolbox prices
the known attacks (combinatorial rank-syndrome decoding, its adaptations to
either proposal, and algebraic MinRank solving) in log2 operations, and
reproduces the reference parameter tables.

Everything here is pure computation; the bundled parameter rows are data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import matq
from .backend import matmul_mod, rank_mod
from .errors import ParameterError
from .matq import log2_int
from .pke import ParamsI, ParamsII, Ciphertext

__all__ = [
    "BlockCode",
    "block_information_set",
    "twisted_power",
    "sum_of_powers_dim",
    "distinguish",
    "DistinguishResult",
    "EXPANDED_GABIDULIN_LIKE",
    "RANDOM_LIKE",
    "sigma",
    "MinRankInstance",
    "minrank_from_ciphertext",
    "minrank_bruteforce",
    "cost_rsd_combinatorial",
    "cost_proposal_i",
    "cost_proposal_ii",
    "minrank_table_rows",
    "cost_minrank_algebraic",
    "key_size_and_rate",
    "CostReport",
    "security_report",
    "REFERENCE_ROWS",
    "params_for_row",
    "reference_table_csv",
]


EXPANDED_GABIDULIN_LIKE = "expanded-gabidulin-like"
RANDOM_LIKE = "random-like"


class BlockCode:
    """A K x N generator over F_q whose N = nm columns and K = km rows are
    grouped into m-blocks."""

    def __init__(self, G, q, m):
        G = np.asarray(G, dtype=np.int64) % q
        if G.ndim != 2:
            raise ParameterError("generator must be a matrix")
        K, N = G.shape
        if m < 1 or K % m or N % m:
            raise ParameterError(f"dimensions {K}x{N} are not multiples of m={m}")
        self.G = G
        self.q = q
        self.m = m
        self.n = N // m
        self.k = K // m
        self.N = N
        self.K = K

    @classmethod
    def from_expanded(cls, ec):
        return cls(ec.Ghat, ec.q, ec.parent.field.m)

    def __repr__(self):
        return f"BlockCode(q={self.q}, m={self.m}, n={self.n}, k={self.k})"


def block_information_set(bc):
    """Lexicographically first set of k column blocks on which the code's
    row space has full rank K, or None when no such set exists.

    Greedy selection is lex-first whenever it completes: if it picks block j
    while the lex-first solution skips j, swapping j in keeps independence
    (rank was seen to grow) and lowers the set, a contradiction. When greedy
    stalls, all k-subsets are tried in lexicographic order.
    """
    G, q, m = bc.G, bc.q, bc.m
    chosen = []
    cur = np.empty((bc.K, 0), dtype=np.int64)
    cur_rank = 0
    for j in range(bc.n):
        if len(chosen) == bc.k:
            break
        cand = np.hstack([cur, G[:, j * m : (j + 1) * m]])
        r = rank_mod(cand, q)
        if r == cur_rank + m:
            chosen.append(j)
            cur = cand
            cur_rank = r
    if len(chosen) == bc.k:
        return chosen
    for subset in combinations(range(bc.n), bc.k):
        cols = np.concatenate([np.arange(j * m, (j + 1) * m) for j in subset])
        if rank_mod(G[:, cols], q) == bc.K:
            return list(subset)
    return None


def _mat_pow(M, e, q):
    R = np.eye(M.shape[0], dtype=np.int64)
    base = M % q
    while e:
        if e & 1:
            R = matmul_mod(R, base, q)
        base = matmul_mod(base, base, q)
        e >>= 1
    return R


def _block_power(G, m, e, q):
    out = np.empty_like(G)
    for u in range(G.shape[0] // m):
        for j in range(G.shape[1] // m):
            out[u * m : (u + 1) * m, j * m : (j + 1) * m] = _mat_pow(
                G[u * m : (u + 1) * m, j * m : (j + 1) * m], e, q
            )
    return out


def twisted_power(bc, s):
    """The code generated by raising every m x m block of the block-
    information-set generator to the q^s-th matrix power.

    On the expansion of a parent code this is exactly the expansion of the
    parent's entrywise q^s Frobenius image, because the blocks of the
    information-set generator represent multiplications by field elements
    and matrix powers of those are the multiplications by the powered
    elements. Without a block information set the deterministic fallback
    powers the blocks of the rref generator instead.
    """
    info = block_information_set(bc)
    q, m = bc.q, bc.m
    if info is not None:
        cols = np.concatenate([np.arange(j * m, (j + 1) * m) for j in info])
        GI = matmul_mod(matq.inv(bc.G[:, cols], q), bc.G, q)
    else:
        R, rank, _ = matq.rref(bc.G, q)
        GI = R[: bc.K]
    return BlockCode(_block_power(GI, m, q**s, q), q, m)


def sum_of_powers_dim(bc, i):
    """dim(C + C^(1) + ... + C^(i)) via a stacked-generator rank."""
    stack = [bc.G] + [twisted_power(bc, s).G for s in range(1, i + 1)]
    return rank_mod(np.vstack(stack), bc.q)


@dataclass(frozen=True)
class DistinguishResult:
    verdict: str
    dual_verdict: str
    dim: int
    dual_dim: int
    threshold: int
    dual_threshold: int

    def __str__(self):
        return (
            f"primal: dim(C + C^(1)) = {self.dim}, threshold {self.threshold} -> {self.verdict}; "
            f"dual: dim = {self.dual_dim}, threshold {self.dual_threshold} -> {self.dual_verdict}"
        )


def _one_sided_verdict(bc):
    dim = sum_of_powers_dim(bc, 1)
    threshold = (bc.k + 1) * bc.m
    separable = threshold < min(bc.N, 2 * bc.k * bc.m)
    verdict = EXPANDED_GABIDULIN_LIKE if (dim <= threshold and separable) else RANDOM_LIKE
    return verdict, dim, threshold


def distinguish(bc):
    """Verdict for bc and for its dual code.

    A code is flagged expanded-Gabidulin-like when one twisted power grows
    its dimension to at most (k+1)m while a random code of the same shape
    would exceed that with high probability; the dual of an expanded
    Gabidulin code is again one, so both verdicts agree on honest inputs.
    """
    if not (bc.K < bc.N):
        raise ParameterError("need a proper code (K < N)")
    if bc.m < 2:
        raise ParameterError("need block size m >= 2")
    if bc.q < 3:
        raise ParameterError(
            "the twisted-power test is degenerate over F_2; use q >= 3"
        )
    verdict, dim, thr = _one_sided_verdict(bc)
    dual = BlockCode(matq.right_kernel(bc.G, bc.q), bc.q, bc.m)
    dual_verdict, dual_dim, dual_thr = _one_sided_verdict(dual)
    return DistinguishResult(verdict, dual_verdict, dim, dual_dim, thr, dual_thr)


# -- MinRank reduction -------------------------------------------------------


def sigma(x, n):
    """Reshape a length-ns vector into the n x s matrix of its chunks."""
    x = np.asarray(x, dtype=np.int64)
    if x.ndim != 1 or n < 1 or x.shape[0] % n:
        raise ParameterError(f"length {x.shape} does not split into {n} rows")
    return x.reshape(n, -1)


@dataclass(frozen=True)
class MinRankInstance:
    """Find a nonzero combination of the matrices with rank at most r."""

    matrices: np.ndarray
    r: int
    q: int

    def __post_init__(self):
        if self.matrices.ndim != 3:
            raise ParameterError("matrices must be a (count, rows, cols) stack")


def minrank_from_ciphertext(pk, y):
    """The decoding attack's instance: M_0 = sigma_n(y), M_i = sigma_n of
    the i-th public generator row; target t for Proposal I and lambda*t for
    Proposal II. The vector (1, -x) is a solution by construction."""
    p = pk.params
    y = y.y if isinstance(y, Ciphertext) else np.asarray(y, dtype=np.int64)
    if y.shape != (p.N,):
        raise ParameterError(f"ciphertext length {y.shape}, expected ({p.N},)")
    mats = np.empty((p.K + 1, p.n, p.N // p.n), dtype=np.int64)
    mats[0] = sigma(y, p.n)
    for i in range(p.K):
        mats[i + 1] = sigma(pk.G_pub[i], p.n)
    target = pk.t if pk.proposal == "I" else p.lam * pk.t
    return MinRankInstance(mats, target, p.q)


def minrank_bruteforce(inst, normalize_first=True):
    """First coefficient vector (lexicographic) whose combination has rank
    at most r, or None; with normalize_first the leading coefficient is
    pinned to 1. Exhaustive, so guarded to desk-scale instances."""
    count = inst.matrices.shape[0]
    q = inst.q
    free = count - 1 if normalize_first else count
    if q**free > 2**24:
        raise ParameterError("instance too large for exhaustive search")
    flat = inst.matrices.reshape(count, -1)
    shape = inst.matrices.shape[1:]
    for tail in product(range(q), repeat=free):
        coeffs = (1,) + tail if normalize_first else tail
        if not any(coeffs):
            continue
        M = (np.asarray(coeffs, dtype=np.int64) @ flat) % q
        if rank_mod(M.reshape(shape), q) <= inst.r:
            return np.asarray(coeffs, dtype=np.int64)
    return None


# -- attack costs ------------------------------------------------------------


def cost_rsd_combinatorial(q, m, n, k, t):
    """log2 cost of combinatorial rank-syndrome decoding: cubic linear
    algebra over the guess space, with the success probability evaluated
    exactly from Gaussian binomials (no asymptotic shortcut)."""
    if not (0 < k < n) or t < 0 or t > n - k:
        raise ParameterError("need 0 < k < n and 0 <= t <= n - k")
    poly = 3 * math.log2(m) + 3 * math.log2(n - k)
    if t == 0:
        return poly
    if n > m:
        u, tprime = m, m - (-(-k * m // n))
    else:
        u, tprime = n, n - k
    if t > tprime:
        return math.inf
    return poly - matq.subspace_prob_log2(u, tprime, t, q)


def cost_proposal_i(params):
    """log2 cost of the best published combinatorial attack on Proposal I."""
    q, m, n, k, lam, t = params.q, params.m, params.n, params.k, params.lam, params.t
    if n > lam:
        exponent = t * (lam - m + (-(-k * m // n)))
    else:
        exponent = t * (n - (m * (n - k)) // lam)
    return 3 * math.log2(m) + 3 * math.log2(n - k) + exponent * math.log2(q)


def cost_proposal_ii(params):
    """log2 cost of the best published combinatorial attack on Proposal II
    (minimum of the two guessing strategies)."""
    q, m, n, k, lam, t = params.q, params.m, params.n, params.k, params.lam, params.t
    exponent = min(lam * t * k, t * (params.u_c - (n - k) // lam))
    return 3 * math.log2(m) + 3 * math.log2(n - k) + exponent * math.log2(q)


def minrank_table_rows(q, rows, cols, numMat, r):
    """Per-technique log2 costs of algebraic MinRank solving, None when a
    technique's applicability condition fails. Conditions and counts use
    exact big-integer binomials.

    Internally this maps onto the standard symbols m = rows, n = cols,
    k = numMat, t = target rank, with omega = 2.8.
    """
    if r > min(rows, cols) or r < 0:
        raise ParameterError("target rank exceeds the matrix dimensions")
    m, n, k, t = rows, cols, numMat, r
    out = []

    A = k * math.comb(n, t)
    B = m * math.comb(n, t + 1)
    if A > 0 and B > 0 and A - 1 <= B:
        out.append(("minrank_linearization", math.log2(B) + 1.8 * math.log2(A)))
    else:
        out.append(("minrank_linearization", None))

    def sm_cost(A_b):
        return math.log2(k * (t + 1)) + 2 * log2_int(A_b)

    best = None
    for b in range(1, t + 2):
        if b >= q:
            break
        A_b = math.comb(n, t) * math.comb(k + b - 1, b)
        B_b = sum(
            (-1) ** (i + 1)
            * math.comb(n, t + i)
            * math.comb(m + i - 1, i)
            * math.comb(k + b - i - 1, b - i)
            for i in range(1, b + 1)
        )
        if A_b > 0 and A_b - 1 <= B_b:
            best = sm_cost(A_b)
            break
    out.append(("minrank_support_minors", best))

    best = None
    if q == 2:
        for b in range(1, t + 2):
            A_b = sum(math.comb(n, t) * math.comb(k, j) for j in range(1, b + 1))
            B_b = sum(
                (-1) ** (i + 1)
                * math.comb(n, t + i)
                * math.comb(m + i - 1, i)
                * math.comb(k, j - i)
                for j in range(1, b + 1)
                for i in range(1, j + 1)
            )
            if A_b > 0 and A_b - 1 <= B_b:
                best = sm_cost(A_b)
                break
    out.append(("minrank_support_minors_f2", best))
    return out


def cost_minrank_algebraic(q, rows, cols, numMat, r):
    """Minimum applicable cost over the algebraic techniques, +inf if none."""
    costs = [c for _, c in minrank_table_rows(q, rows, cols, numMat, r) if c is not None]
    return min(costs) if costs else math.inf


def key_size_and_rate(params, proposal):
    """(public key bytes, information rate) by the information-theoretic
    count: K(N-K) field elements at log2(q) bits each, rounded up to whole
    bytes."""
    q, m, n, k, lam = params.q, params.m, params.n, params.k, params.lam
    r = n - k
    if proposal == "I":
        elements = m * r * (n * lam - m * r)
        rate = (n * lam - m * r) / (n * lam)
    elif proposal == "II":
        elements = r * k * m * m
        rate = k / n
    else:
        raise ParameterError(f"unknown proposal {proposal!r}")
    bits = elements * math.log2(q)
    return math.ceil(bits / 8), rate


@dataclass(frozen=True)
class CostReport:
    proposal: str
    params: object
    keysize_bytes: int
    info_rate: float
    cost_proposal_log2: float
    minrank_rows: tuple
    cost_minrank_log2: float
    security_bits: int

    def __str__(self):
        p = self.params
        lines = [
            f"proposal {self.proposal}  q={p.q} m={p.m} n={p.n} k={p.k} lambda={p.lam}",
            f"  public key: {self.keysize_bytes} bytes, rate {self.info_rate:.2f}",
            f"  combinatorial attack: 2^{self.cost_proposal_log2:.1f}",
        ]
        for name, cost in self.minrank_rows:
            lines.append(
                f"  {name}: " + (f"2^{cost:.1f}" if cost is not None else "not applicable")
            )
        lines.append(f"  security: {self.security_bits} bits")
        return "\n".join(lines)


def security_report(params, proposal):
    """Aggregate of every priced attack on one parameter set: the floor of
    the cheapest attack is the claimed security level."""
    if proposal == "I":
        cost_prop = cost_proposal_i(params)
        shape = (params.q, params.n, params.lam, params.K + 1, params.t)
    elif proposal == "II":
        cost_prop = cost_proposal_ii(params)
        shape = (params.q, params.n, params.m, params.K + 1, params.lam * params.t)
    else:
        raise ParameterError(f"unknown proposal {proposal!r}")
    rows = minrank_table_rows(*shape)
    applicable = [c for _, c in rows if c is not None]
    cost_mr = min(applicable) if applicable else math.inf
    bytes_, rate = key_size_and_rate(params, proposal)
    return CostReport(
        proposal=proposal,
        params=params,
        keysize_bytes=bytes_,
        info_rate=rate,
        cost_proposal_log2=cost_prop,
        minrank_rows=tuple(rows),
        cost_minrank_log2=cost_mr,
        security_bits=math.floor(min(cost_prop, cost_mr)),
    )


# Reference parameter rows: (proposal, q, m, n, k, lambda, target bits).
REFERENCE_ROWS = (
    ("I", 2, 31, 31, 19, 29, 128),
    ("I", 2, 38, 38, 20, 36, 192),
    ("I", 2, 45, 45, 25, 43, 256),
    ("I", 7, 20, 20, 12, 18, 128),
    ("I", 7, 24, 24, 14, 22, 192),
    ("I", 7, 28, 28, 16, 26, 256),
    ("I", 13, 18, 18, 12, 16, 128),
    ("I", 13, 21, 21, 11, 19, 192),
    ("I", 13, 25, 25, 15, 23, 256),
    ("II", 2, 56, 56, 28, 2, 128),
    ("II", 2, 72, 72, 32, 2, 192),
    ("II", 2, 84, 84, 40, 2, 256),
    ("II", 7, 35, 35, 23, 2, 128),
    ("II", 7, 45, 45, 29, 2, 192),
    ("II", 7, 51, 51, 31, 2, 256),
    ("II", 13, 29, 29, 17, 2, 128),
    ("II", 13, 37, 37, 21, 2, 192),
    ("II", 13, 43, 43, 23, 2, 256),
)


def params_for_row(row):
    proposal, q, m, n, k, lam = row[:6]
    cls = ParamsI if proposal == "I" else ParamsII
    return cls(q, m, n, k, lam)


def reference_table_csv():
    """The bundled parameter rows as CSV, one line per row, evaluated fresh."""
    lines = ["q,m,n,k,lambda,proposal,keybytes,rate,security_bits,cost_proposal,cost_minrank"]
    for row in REFERENCE_ROWS:
        proposal, q, m, n, k, lam, _target = row
        rep = security_report(params_for_row(row), proposal)
        mr = "inf" if math.isinf(rep.cost_minrank_log2) else f"{rep.cost_minrank_log2:.1f}"
        lines.append(
            f"{q},{m},{n},{k},{lam},{proposal},{rep.keysize_bytes},"
            f"{rep.info_rate:.2f},{rep.security_bits},{rep.cost_proposal_log2:.1f},{mr}"
        )
    return "\n".join(lines) + "\n"
