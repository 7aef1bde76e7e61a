"""Gabidulin codes: Moore generator matrices and rank-error decoding.

A Gabidulin code of length n and dimension k over GF(q^m) is generated by the
Moore matrix of a vector g whose entries are linearly independent over F_q:
row i is the entrywise q^i-th power of g. These codes are MRD, so the minimum
rank distance is n - k + 1 and up to t = floor((n-k)/2) rank errors are
uniquely decodable.

The decoder is syndrome-based. Writing an error of rank w as e_j = sum_l
E_l c_{lj} with E_1..E_w in GF(q^m) independent over F_q and C an F_q matrix
of rank w, the syndrome against the structured parity check (a Moore matrix
of a dual vector h') becomes s'_i = sum_l E_l x_l^{[i]} with x_l = sum_j
c_{lj} h'_j. A linearized annihilator of the E_l is found from a small linear
system (the rank-metric analogue of the classical locator polynomial), its
root space yields the E_l, and two more linear solves recover the x_l and
then C. Every candidate error is verified against the stored parity check
before being returned, so a wrong answer is never produced silently.
"""

from __future__ import annotations

import numpy as np

from . import matq
from .backend import matmul_mod, rank_mod
from .errors import DecodeFailure, ParameterError

__all__ = [
    "GabidulinCode",
    "make_gabidulin",
    "rank_weight",
    "decode_syndrome",
    "min_rank_distance_bruteforce",
    "min_hamming_distance_bruteforce",
]


def _coord_matrix(v):
    """len(v) x m int matrix of power-basis coordinates."""
    return np.array([x.coeffs for x in v], dtype=np.int64)


def rank_weight(v):
    """Rank over F_q of the coordinate matrix of v; basis independent."""
    v = [x for x in np.asarray(v, dtype=object).ravel()]
    if not v:
        return 0
    field = v[0].field
    return rank_mod(_coord_matrix(v), field.q)


def _moore(g, rows):
    """Moore matrix: row i is the entrywise [i]-th Frobenius power of g."""
    n = len(g)
    M = np.empty((rows, n), dtype=object)
    if rows:
        M[0] = g
    for i in range(1, rows):
        for j in range(n):
            M[i, j] = M[i - 1, j].frob(1)
    return M


class GabidulinCode:
    """Immutable [n, k] Gabidulin code plus the decoder's precomputed data.

    G is the k x n Moore generator, H a deterministic basis of its right
    kernel (the working parity check). The structured check used inside the
    decoder is the (n-k)-row Moore matrix of h' = h^{[-(n-k-1)]}, where h
    spans the kernel of the (n-1)-row Moore matrix of g; _R converts stored
    syndromes to structured ones via s' = s R^T.
    """

    def __init__(self, field, g, k):
        n = len(g)
        if not (1 <= k <= n <= field.m):
            raise ParameterError(f"need 1 <= k <= n <= m, got k={k} n={n} m={field.m}")
        g = np.array(list(g), dtype=object)
        for x in g:
            if x.field != field:
                raise ParameterError("generator entries from a different field")
        if rank_weight(g) != n:
            raise ParameterError("g must have rank weight n")
        self.field = field
        self.n = n
        self.k = k
        self.g = g
        self.G = _moore(g, k)
        self.H = matq.right_kernel(self.G) if k < n else np.empty((0, n), dtype=object)
        self.t = (n - k) // 2
        self._hdual = None
        self._R = None
        self._hcoord = None
        if k < n:
            self._build_dual()

    def _build_dual(self):
        field, n, k = self.field, self.n, self.k
        ker = matq.right_kernel(_moore(self.g, n - 1))
        assert ker.shape[0] == 1
        h = ker[0]
        hdual = np.array([x.frob(-(n - k - 1)) for x in h], dtype=object)
        Hs = _moore(hdual, n - k)
        # the structured matrix really is a parity check for G
        assert not matq.matmul(self.G, Hs.T).any()
        # H has full row rank, so the change of basis is unique
        Rt = matq.solve(self.H.T, Hs.T)
        self._hdual = hdual
        self._R = Rt.T
        self._hcoord = _coord_matrix(hdual)
        assert rank_mod(self._hcoord, field.q) == n

    def __repr__(self):
        return f"GabidulinCode(q={self.field.q}, m={self.field.m}, n={self.n}, k={self.k})"


def make_gabidulin(field, g, k):
    return GabidulinCode(field, g, k)


def _try_rank(code, sprime, tau):
    """One attempt at decoding with an assumed error rank tau; None on any
    failed step so the caller can fall through to a smaller rank."""
    field = code.field
    q, m = field.q, field.m
    r = code.n - code.k

    # annihilator coefficients: sum_p lam_p s'_{i-p}^{[p]} = 0 for i >= tau,
    # with lam_tau = 1 moved to the right-hand side
    A = np.empty((r - tau, tau), dtype=object)
    b = np.empty(r - tau, dtype=object)
    for row, i in enumerate(range(tau, r)):
        for p in range(tau):
            A[row, p] = sprime[i - p].frob(p)
        b[row] = -(sprime[i - tau].frob(tau))
    try:
        lam = matq.solve(A, b)
    except ValueError:
        return None

    # root space of Lam(z) = sum_p lam_p z^{[p]}, as the kernel of its
    # F_q-linear matrix; coords(Lam(z)) = coords(z) @ L
    L = field.frob_matrix(tau)
    for p in range(tau):
        if lam[p]:
            L = (L + matmul_mod(field.frob_matrix(p), field.mult_matrix(lam[p]), q)) % q
    basis = matq.right_kernel(L.T, q)
    if basis.shape[0] != tau:
        return None
    E = [field.elem(row) for row in basis]

    # x_l from the twisted-linear system, made F_qm-linear by applying the
    # inverse Frobenius [i] to equation i
    D = np.empty((r, tau), dtype=object)
    rhs = np.empty(r, dtype=object)
    for i in range(r):
        for l in range(tau):
            D[i, l] = E[l].frob(-i)
        rhs[i] = sprime[i].frob(-i)
    try:
        x = matq.solve(D, rhs)
    except ValueError:
        return None

    # support rows: x_l = sum_j c_{lj} h'_j with c over F_q; h' has full
    # rank weight so the coordinate system is uniquely solvable when
    # consistent
    Xc = _coord_matrix(x)
    try:
        C = matq.solve(code._hcoord.T, Xc.T, q)
    except ValueError:
        return None

    e = np.empty(code.n, dtype=object)
    for j in range(code.n):
        acc = field.zero()
        for l in range(tau):
            c = int(C[j, l])
            if c:
                acc = acc + E[l] * c
        e[j] = acc
    return e


def decode_syndrome(code, s, t):
    """The unique error e with e H^T = s and w_R(e) <= t, or DecodeFailure.

    t must not exceed floor((n-k)/2); inside that radius the answer is unique
    because the code is MRD. The assumed rank is decremented from t until a
    verified error is found, so beyond-radius syndromes either fail or land
    on a legitimate in-radius coset leader, never on a corrupted answer.
    """
    r = code.n - code.k
    if t < 0 or t > (code.n - code.k) // 2:
        raise ParameterError(f"radius {t} exceeds floor((n-k)/2) = {(code.n - code.k) // 2}")
    s = np.asarray(s, dtype=object).ravel()
    if s.shape[0] != r:
        raise DecodeFailure(f"syndrome length {s.shape[0]}, expected {r}")
    field = code.field
    if not s.any():
        return np.array([field.zero()] * code.n, dtype=object)
    sprime = np.array(
        [sum((code._R[i, j] * s[j] for j in range(r) if s[j]), field.zero()) for i in range(r)],
        dtype=object,
    )
    for tau in range(t, 0, -1):
        e = _try_rank(code, sprime, tau)
        if e is None:
            continue
        if rank_weight(e) > t:
            continue
        chk = matq.matmul(e.reshape(1, -1), code.H.T)
        if all(chk[0, j] == s[j] for j in range(r)):
            return e
    raise DecodeFailure("no error of the requested rank matches the syndrome")


def _enumerate_codeword_coords(code, chunk=4096):
    """Yield batches of codeword coordinate matrices, one (rows, n*m) int
    array per batch, covering all q^{km} messages including zero."""
    field = code.field
    q, m, n, k = field.q, field.m, code.n, code.k
    # message coordinates -> codeword coordinates is F_q-linear
    Gexp = np.zeros((k * m, n * m), dtype=np.int64)
    for slot in range(k):
        for u in range(m):
            mono = field.elem([0] * u + [1] + [0] * (m - 1 - u))
            for j in range(n):
                Gexp[slot * m + u, j * m : (j + 1) * m] = (mono * code.G[slot, j]).coeffs
    dims = k * m
    total = q**dims
    radix = q ** np.arange(dims, dtype=object)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=object)
        digits = np.zeros((idx.shape[0], dims), dtype=np.int64)
        for d in range(dims):
            digits[:, d] = (idx // radix[d]) % q
        yield matmul_mod(digits, Gexp, q)


def _guard_enumeration(code):
    field = code.field
    if field.order() ** code.k > 2**24:
        raise ParameterError("code too large to enumerate (q^{km} > 2^24)")


def min_rank_distance_bruteforce(code):
    """Exact minimum rank weight over all nonzero codewords; tiny codes only."""
    _guard_enumeration(code)
    m, n = code.field.m, code.n
    best = n + 1
    first = True
    for batch in _enumerate_codeword_coords(code):
        if first:
            batch = batch[1:]
            first = False
        for row in batch:
            w = rank_mod(row.reshape(n, m), code.field.q)
            if w < best:
                best = w
                if best == 1:
                    return 1
    return best


def min_hamming_distance_bruteforce(code):
    """Exact minimum Hamming weight (nonzero symbols over GF(q^m))."""
    _guard_enumeration(code)
    m, n = code.field.m, code.n
    best = n + 1
    first = True
    for batch in _enumerate_codeword_coords(code):
        if first:
            batch = batch[1:]
            first = False
        nz = batch.reshape(batch.shape[0], n, m).any(axis=2)
        w = int(nz.sum(axis=1).min()) if batch.shape[0] else best
        if w < best:
            best = w
    return best
