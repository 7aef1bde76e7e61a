"""Expanded Gabidulin codes over F_q and their four-step decoder.

Expanding an [n, k] code over GF(q^m) through a basis B = (alpha_1..alpha_m)
gives an [nm, km] code over F_q: each parent row u turns into the m rows
phi_B(alpha_i g_u), and the parity check inherits the block structure of the
parent's H column by column. Decoding reduces to the parent decoder because
the expansion commutes with syndromes: phi_B(v) Hhat^T = phi_B(v H^T).

Error weights for the expanded code are measured on the n x m error matrix
whose row j is the j-th length-m block of the error vector, not in Hamming
weight; decoding succeeds exactly when that matrix has rank at most
floor((n-k)/2).
"""

from __future__ import annotations

import numpy as np

from .backend import matmul_mod
from .errors import ParameterError
from .gabidulin import decode_syndrome
from .gf import phi, phi_inv, phi_matrix

__all__ = [
    "ExpandedCode",
    "expand_code",
    "syndrome_expanded",
    "decode_expanded",
    "hamming_distance_bounds_check",
]


class ExpandedCode:
    """[nm, km] expansion of a Gabidulin parent through a fixed basis."""

    def __init__(self, parent, basis):
        if basis.field != parent.field:
            raise ParameterError("basis and code live in different fields")
        self.parent = parent
        self.basis = basis
        m = parent.field.m
        self.q = parent.field.q
        self.N = parent.n * m
        self.K = parent.k * m
        self.Ghat = phi_matrix(basis, parent.G, "full-expand")
        if parent.k < parent.n:
            self.Hhat = phi_matrix(basis, parent.H.T, "full-expand").T.copy()
        else:
            self.Hhat = np.zeros((0, self.N), dtype=np.int64)

    def __repr__(self):
        p = self.parent
        return f"ExpandedCode(q={self.q}, m={p.field.m}, n={p.n}, k={p.k})"


def expand_code(parent, basis):
    return ExpandedCode(parent, basis)


def syndrome_expanded(ec, y):
    """y Hhat^T; zero exactly on codewords."""
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (ec.N,):
        raise ParameterError(f"received word has length {y.shape}, expected ({ec.N},)")
    return matmul_mod(y.reshape(1, -1), ec.Hhat.T, ec.q)[0]


def decode_expanded(ec, y):
    """(c, e) with y = c + e, c a codeword, and the n x m error matrix of e
    of rank at most floor((n-k)/2); DecodeFailure beyond that radius.

    Steps: expanded syndrome, contraction to the parent field, parent
    decoding, re-expansion of the parent error.
    """
    y = np.asarray(y, dtype=np.int64) % ec.q
    s = syndrome_expanded(ec, y)
    sigma = phi_inv(ec.basis, s)
    estar = decode_syndrome(ec.parent, sigma, ec.parent.t)
    e = phi(ec.basis, estar)
    c = (y - e) % ec.q
    return c, e


def hamming_distance_bounds_check(ec, exhaustive_limit):
    """(d_H, flag): exact minimum Hamming weight by enumeration, and whether
    it lies in [n-k+1, m(n-k)+1]."""
    q = ec.q
    total = q**ec.K
    if total > exhaustive_limit:
        raise ParameterError(f"q^K = {total} exceeds the enumeration limit")
    p = ec.parent
    best = ec.N + 1
    radix = q ** np.arange(ec.K, dtype=object)
    chunk = 4096
    for start in range(1, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=object)
        digits = np.zeros((idx.shape[0], ec.K), dtype=np.int64)
        for d in range(ec.K):
            digits[:, d] = (idx // radix[d]) % q
        words = matmul_mod(digits, ec.Ghat, q)
        w = int((words != 0).sum(axis=1).min())
        if w < best:
            best = w
    lo, hi = p.n - p.k + 1, p.field.m * (p.n - p.k) + 1
    return best, lo <= best <= hi
