"""Two McEliece-style encryption schemes on expanded Gabidulin codes.

Proposal I hides a column selection: the public code is the right kernel of
the first lambda columns of every m-block of the expanded parity check,
scrambled blockwise by a secret invertible A. Proposal II publishes the full
expanded generator scrambled by a larger blockwise mixer and encrypts with
errors whose m-block structure keeps the decodable rank small.

Both decryptions run the same chain: unscramble the received word, take its
syndrome against the structured expanded parity check, contract to the
parent field, decode there, and re-expand. Plaintexts are raw F_q vectors
(the first K coordinates of the corrected word, thanks to the systematic
public generator); there is no padding or CCA wrapping here.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import matq
from .backend import matmul_mod, rank_mod
from .errors import (
    DecodeFailure,
    DecryptFailure,
    FormatError,
    NotSystematic,
    ParameterError,
)
from .expand import expand_code
from .gabidulin import decode_syndrome, make_gabidulin, rank_weight
from .gf import BasisPair, make_ext_field, phi, phi_inv, random_basis

__all__ = [
    "ParamsI",
    "ParamsII",
    "PublicKey",
    "PrivateKey",
    "Ciphertext",
    "keygen_i",
    "keygen_ii",
    "encrypt_i",
    "encrypt_ii",
    "decrypt_i",
    "decrypt_ii",
    "sample_error_ii",
    "encode_key",
    "decode_key",
    "encode_ciphertext",
    "decode_ciphertext",
]

_MAGIC = b"XGAB"
_VERSION = 1
_TAG_PK_I, _TAG_SK_I, _TAG_PK_II, _TAG_SK_II, _TAG_CT = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class ParamsI:
    """Proposal I parameters; the strict lambda window keeps K >= 1."""

    q: int
    m: int
    n: int
    k: int
    lam: int

    def __post_init__(self):
        q, m, n, k, lam = self.q, self.m, self.n, self.k, self.lam
        if not (1 <= k < n <= m):
            raise ParameterError(f"need 1 <= k < n <= m, got k={k} n={n} m={m}")
        if n - k < 2:
            raise ParameterError("need n - k >= 2 so at least one error is correctable")
        if not (m * (n - k) < lam * n and lam < m):
            raise ParameterError(f"need m(n-k)/n < lambda < m, got lambda={lam}")

    @property
    def K(self):
        return self.lam * self.n - self.m * (self.n - self.k)

    @property
    def N(self):
        return self.lam * self.n

    @property
    def t(self):
        return (self.n - self.k) // 2

    @property
    def S(self):
        """Kept columns: the first lambda of each m-block."""
        return np.array(
            [j * self.m + i for j in range(self.n) for i in range(self.lam)], dtype=np.int64
        )


@dataclass(frozen=True)
class ParamsII:
    """Proposal II parameters; lambda divides the blocks, t counts block errors."""

    q: int
    m: int
    n: int
    k: int
    lam: int

    def __post_init__(self):
        q, m, n, k, lam = self.q, self.m, self.n, self.k, self.lam
        if not (1 <= lam < k < n <= m):
            raise ParameterError(f"need 1 <= lambda < k < n <= m, got lambda={lam} k={k} n={n} m={m}")
        if (n - k) // (2 * lam) < 1:
            raise ParameterError("need floor((n-k)/(2 lambda)) >= 1")

    @property
    def u_f(self):
        return self.n // self.lam

    @property
    def u_c(self):
        return -(-self.n // self.lam)

    @property
    def v(self):
        return self.n - self.lam * self.u_f

    @property
    def K(self):
        return self.k * self.m

    @property
    def N(self):
        return self.n * self.m

    @property
    def t(self):
        return (self.n - self.k) // (2 * self.lam)


class PublicKey:
    """(G_pub, t) with G_pub = [I_K | *] over F_q."""

    def __init__(self, proposal, params, G_pub, t):
        K, N = params.K, params.N
        if G_pub.shape != (K, N):
            raise ParameterError(f"G_pub shape {G_pub.shape}, expected {(K, N)}")
        if not (G_pub[:, :K] == np.eye(K, dtype=np.int64)).all():
            raise ParameterError("G_pub is not in systematic form")
        self.proposal = proposal
        self.params = params
        self.G_pub = G_pub
        self.t = t

    def __eq__(self, other):
        return (
            isinstance(other, PublicKey)
            and self.proposal == other.proposal
            and self.params == other.params
            and self.t == other.t
            and (self.G_pub == other.G_pub).all()
        )

    def __repr__(self):
        return f"PublicKey(proposal={self.proposal}, params={self.params}, t={self.t})"


def _apply_blocks(M, blocks, q):
    """Right-multiply by the block-diagonal matrix described by
    [(count, B), ...]; cheaper than materializing it."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    r = M.shape[0]
    parts = []
    col = 0
    for count, B in blocks:
        b = B.shape[0]
        width = count * b
        seg = M[:, col : col + width].reshape(r, count, b)
        parts.append(((seg @ B) % q).reshape(r, width))
        col += width
    if col != M.shape[1]:
        raise ParameterError("block widths do not cover the matrix")
    return np.concatenate(parts, axis=1)


class PrivateKey:
    """(B, g, A) plus everything re-derivable from them.

    The stored secret is deliberately minimal; the parent code, expansion,
    scrambler blocks and public key are rebuilt deterministically, which is
    what makes serialized keys reproduce G_pub bit for bit.
    """

    def __init__(self, proposal, params, basis, g, A, _parent=None, _ec=None):
        self.proposal = proposal
        self.params = params
        self.basis = basis
        self.g = np.asarray(g, dtype=object)
        self.A = np.asarray(A, dtype=np.int64)
        field = basis.field
        if (field.q, field.m) != (params.q, params.m):
            raise ParameterError("basis field does not match the parameters")
        self.parent = _parent if _parent is not None else make_gabidulin(field, self.g, params.k)
        self.ec = _ec if _ec is not None else expand_code(self.parent, basis)
        q = params.q
        Ainv = matq.inv(self.A, q)
        if proposal == "I":
            if self.A.shape != (params.lam, params.lam):
                raise ParameterError("A must be lambda x lambda for Proposal I")
            self._t_blocks = [(params.n, self.A)]
            self._tinv_blocks = [(params.n, Ainv)]
            self.HhatS = self.ec.Hhat[:, params.S].copy()
        elif proposal == "II":
            mlam = params.m * params.lam
            if self.A.shape != (mlam, mlam):
                raise ParameterError("A must be m*lambda x m*lambda for Proposal II")
            if params.v > 0:
                mv = params.m * params.v
                sub = self.A[:mv, :mv]
                self._t_blocks = [(params.u_f, self.A), (1, sub)]
                self._tinv_blocks = [(params.u_f, Ainv), (1, matq.inv(sub, q))]
            else:
                self._t_blocks = [(params.u_f, self.A)]
                self._tinv_blocks = [(params.u_f, Ainv)]
            self.HhatS = None
        else:
            raise ParameterError(f"unknown proposal {proposal!r}")
        self._pk = None

    def public_key(self):
        """Recompute (G_pub, t) from the stored secret; deterministic."""
        if self._pk is None:
            params, q = self.params, self.params.q
            if self.proposal == "I":
                GS = matq.right_kernel(self.HhatS, q)
                if GS.shape[0] != params.K:
                    raise ParameterError("selected parity check is rank deficient")
                scram = _apply_blocks(GS, self._tinv_blocks, q)
            else:
                scram = _apply_blocks(self.ec.Ghat, self._tinv_blocks, q)
            _, G_pub = matq.systematic_form(scram, q)
            self._pk = PublicKey(self.proposal, params, G_pub, params.t)
        return self._pk

    def __eq__(self, other):
        return (
            isinstance(other, PrivateKey)
            and self.proposal == other.proposal
            and self.params == other.params
            and (self.basis.P == other.basis.P).all()
            and all(a == b for a, b in zip(self.g, other.g))
            and (self.A == other.A).all()
        )

    def __repr__(self):
        return f"PrivateKey(proposal={self.proposal}, params={self.params})"


@dataclass(eq=False)
class Ciphertext:
    proposal: str
    params: object
    y: np.ndarray

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.y.shape != (self.params.N,):
            raise ParameterError(f"ciphertext length {self.y.shape}, expected ({self.params.N},)")

    def __eq__(self, other):
        return (
            isinstance(other, Ciphertext)
            and self.proposal == other.proposal
            and self.params == other.params
            and (self.y == other.y).all()
        )


def _random_full_rank_g(field, n, rng):
    while True:
        g = np.array([field.random(rng) for _ in range(n)], dtype=object)
        if rank_weight(g) == n:
            return g


_SCRAMBLE_RETRIES = 100
_RESAMPLE_RETRIES = 20


def keygen_i(params, rng):
    """(PublicKey, PrivateKey) for Proposal I.

    The mixing matrix is resampled when the leading K columns come out
    singular; after too many misses the code itself is resampled.
    """
    q = params.q
    field = make_ext_field(q, params.m)
    for _ in range(_RESAMPLE_RETRIES):
        g = _random_full_rank_g(field, params.n, rng)
        basis = random_basis(field, rng)
        parent = make_gabidulin(field, g, params.k)
        ec = expand_code(parent, basis)
        GS = matq.right_kernel(ec.Hhat[:, params.S], q)
        if GS.shape[0] != params.K:
            continue
        for _ in range(_SCRAMBLE_RETRIES):
            A = matq.random_invertible(params.lam, q, rng)
            try:
                _, G_pub = matq.systematic_form(
                    _apply_blocks(GS, [(params.n, matq.inv(A, q))], q), q
                )
            except NotSystematic:
                continue
            pk = PublicKey("I", params, G_pub, params.t)
            sk = PrivateKey("I", params, basis, g, A, _parent=parent, _ec=ec)
            sk._pk = pk
            return pk, sk
    raise ParameterError("key generation failed to reach systematic form")


def keygen_ii(params, rng):
    """(PublicKey, PrivateKey) for Proposal II; same retry policy."""
    q = params.q
    mlam = params.m * params.lam
    mv = params.m * params.v
    field = make_ext_field(q, params.m)
    for _ in range(_RESAMPLE_RETRIES):
        g = _random_full_rank_g(field, params.n, rng)
        basis = random_basis(field, rng)
        parent = make_gabidulin(field, g, params.k)
        ec = expand_code(parent, basis)
        for _ in range(_SCRAMBLE_RETRIES):
            A = matq.random_invertible(mlam, q, rng)
            if mv and rank_mod(A[:mv, :mv], q) != mv:
                continue
            tinv = [(params.u_f, matq.inv(A, q))]
            if mv:
                tinv.append((1, matq.inv(A[:mv, :mv], q)))
            try:
                _, G_pub = matq.systematic_form(_apply_blocks(ec.Ghat, tinv, q), q)
            except NotSystematic:
                continue
            pk = PublicKey("II", params, G_pub, params.t)
            sk = PrivateKey("II", params, basis, g, A, _parent=parent, _ec=ec)
            sk._pk = pk
            return pk, sk
    raise ParameterError("key generation failed to reach systematic form")


def _encode_word(pk, x, e):
    q = pk.params.q
    x = np.asarray(x, dtype=np.int64) % q
    if x.shape != (pk.params.K,):
        raise ParameterError(f"plaintext length {x.shape}, expected ({pk.params.K},)")
    y = (matmul_mod(x.reshape(1, -1), pk.G_pub, q)[0] + e) % q
    return Ciphertext(pk.proposal, pk.params, y)


def encrypt_i(pk, x, rng):
    """y = x G_pub + e with e the flattened rank-t n x lambda error matrix."""
    if pk.proposal != "I":
        raise ParameterError("Proposal I public key required")
    p = pk.params
    E = matq.random_rank_t(p.n, p.lam, pk.t, p.q, rng)
    return _encode_word(pk, x, E.reshape(-1))


def sample_error_ii(params, rng):
    """Error vector per the blocked product construction: E = U V is
    u_c x m*lambda of rank exactly t, the last row filled only in its first
    v m-blocks when lambda does not divide n; e concatenates the n blocks."""
    q, m, lam, t, v = params.q, params.m, params.lam, params.t, params.v
    u_c = params.u_c
    mlam = m * lam
    while True:
        U = matq.random_matrix(u_c, t, q, rng)
        V = matq.random_matrix(t, mlam, q, rng)
        if v > 0:
            U[-1, 1:] = 0
            V[0, v * m :] = 0
        E = matmul_mod(U, V, q)
        if rank_mod(E, q) != t:
            continue
        if v > 0:
            e = np.concatenate([E[:-1].reshape(-1), E[-1, : v * m]])
        else:
            e = E.reshape(-1)
        return e


def encrypt_ii(pk, x, rng):
    if pk.proposal != "II":
        raise ParameterError("Proposal II public key required")
    return _encode_word(pk, x, sample_error_ii(pk.params, rng))


def _decode_scrambled_syndrome(sk, y):
    """Common decryption core: unscramble, take the structured syndrome,
    decode in the parent field, re-expand. Returns the expanded error of the
    unscrambled word."""
    params = sk.params
    q = params.q
    yT = _apply_blocks(y.reshape(1, -1), sk._t_blocks, q)
    if sk.proposal == "I":
        s = matmul_mod(yT, sk.HhatS.T, q)[0]
    else:
        s = matmul_mod(yT, sk.ec.Hhat.T, q)[0]
    sigma = phi_inv(sk.basis, s)
    try:
        estar = decode_syndrome(sk.parent, sigma, sk.parent.t)
    except DecodeFailure as exc:
        raise DecryptFailure(str(exc)) from exc
    return phi(sk.basis, estar)


def decrypt_i(sk, ct):
    """Plaintext of a Proposal I ciphertext, or DecryptFailure.

    The decoded expanded error must vanish outside the selected columns;
    that check is exactly what makes y - e a public codeword, so the leading
    K coordinates are the plaintext and no wrong answer can slip through.
    """
    if sk.proposal != "I":
        raise ParameterError("Proposal I private key required")
    params = sk.params
    y = ct.y if isinstance(ct, Ciphertext) else np.asarray(ct, dtype=np.int64)
    if y.shape != (params.N,):
        raise DecryptFailure(f"ciphertext length {y.shape}, expected ({params.N},)")
    y = y % params.q
    epad = _decode_scrambled_syndrome(sk, y)
    mask = np.ones(params.n * params.m, dtype=bool)
    mask[params.S] = False
    if epad[mask].any():
        raise DecryptFailure("decoded error leaves the selected columns")
    eprime = epad[params.S]
    e = _apply_blocks(eprime.reshape(1, -1), sk._tinv_blocks, params.q)[0]
    return (y - e)[: params.K] % params.q


def decrypt_ii(sk, ct):
    """Plaintext of a Proposal II ciphertext, or DecryptFailure."""
    if sk.proposal != "II":
        raise ParameterError("Proposal II private key required")
    params = sk.params
    y = ct.y if isinstance(ct, Ciphertext) else np.asarray(ct, dtype=np.int64)
    if y.shape != (params.N,):
        raise DecryptFailure(f"ciphertext length {y.shape}, expected ({params.N},)")
    y = y % params.q
    eprime = _decode_scrambled_syndrome(sk, y)
    e = _apply_blocks(eprime.reshape(1, -1), sk._tinv_blocks, params.q)[0]
    return (y - e)[: params.K] % params.q


# -- serialization ----------------------------------------------------------


def _header(tag, params):
    return _MAGIC + struct.pack(
        "<BBHHHHH", _VERSION, tag, params.q, params.m, params.n, params.k, params.lam
    )


def _bytes_of(M, q):
    if q > 255:
        raise FormatError("one-byte elements require q <= 255")
    return np.asarray(M, dtype=np.int64).astype(np.uint8).tobytes()


def encode_key(key):
    """Canonical bytes for a public or private key."""
    params = key.params
    if isinstance(key, PublicKey):
        tag = _TAG_PK_I if key.proposal == "I" else _TAG_PK_II
        return _header(tag, params) + _bytes_of(key.G_pub[:, params.K :], params.q)
    if isinstance(key, PrivateKey):
        tag = _TAG_SK_I if key.proposal == "I" else _TAG_SK_II
        gm = np.array([x.coeffs for x in key.g], dtype=np.int64)
        payload = (
            _bytes_of(key.basis.P, params.q)
            + _bytes_of(gm, params.q)
            + _bytes_of(key.A, params.q)
        )
        return _header(tag, params) + payload
    raise FormatError(f"cannot encode {type(key).__name__}")


def encode_ciphertext(ct):
    return _header(_TAG_CT, ct.params) + _bytes_of(ct.y, ct.params.q)


def _parse_header(blob):
    if len(blob) < 16:
        raise FormatError("truncated header")
    if blob[:4] != _MAGIC:
        raise FormatError("bad magic")
    version, tag, q, m, n, k, lam = struct.unpack("<BBHHHHH", blob[4:16])
    if version != _VERSION:
        raise FormatError(f"unsupported version {version}")
    return tag, (q, m, n, k, lam), blob[16:]

def _params_for(tag, raw):
    q, m, n, k, lam = raw
    try:
        if tag in (_TAG_PK_I, _TAG_SK_I):
            return "I", ParamsI(q, m, n, k, lam)
        if tag in (_TAG_PK_II, _TAG_SK_II):
            return "II", ParamsII(q, m, n, k, lam)
        if tag == _TAG_CT:
            try:
                return "I", ParamsI(q, m, n, k, lam)
            except ParameterError:
                return "II", ParamsII(q, m, n, k, lam)
    except ParameterError as exc:
        raise FormatError(f"invalid parameters: {exc}") from exc
    raise FormatError(f"unknown tag {tag}")


def _grid(payload, rows, cols, q, what):
    need = rows * cols
    if len(payload) < need:
        raise FormatError(f"truncated {what}")
    M = np.frombuffer(payload[:need], dtype=np.uint8).astype(np.int64).reshape(rows, cols)
    if (M >= q).any():
        raise FormatError(f"{what} has elements outside F_q")
    return M, payload[need:]


def decode_key(blob):
    """PublicKey or PrivateKey from canonical bytes; FormatError on anything
    malformed, truncated, or violating the parameter invariants."""
    tag, raw, payload = _parse_header(blob)
    if tag == _TAG_CT:
        raise FormatError("ciphertext passed where a key was expected")
    proposal, params = _params_for(tag, raw)
    q = params.q
    if tag in (_TAG_PK_I, _TAG_PK_II):
        right, rest = _grid(payload, params.K, params.N - params.K, q, "public key body")
        if rest:
            raise FormatError("trailing bytes after public key body")
        G_pub = np.hstack([np.eye(params.K, dtype=np.int64), right])
        return PublicKey(proposal, params, G_pub, params.t)
    m, n = params.m, params.n
    P, payload = _grid(payload, m, m, q, "basis matrix")
    gm, payload = _grid(payload, n, m, q, "generator coordinates")
    a = params.lam if proposal == "I" else params.m * params.lam
    A, payload = _grid(payload, a, a, q, "mixing matrix")
    if payload:
        raise FormatError("trailing bytes after private key body")
    if rank_mod(P, q) != m:
        raise FormatError("basis matrix is singular")
    if rank_mod(A, q) != a:
        raise FormatError("mixing matrix is singular")
    field = make_ext_field(q, m)
    basis = BasisPair(field, P)
    g = np.array([field.elem(row) for row in gm], dtype=object)
    if rank_mod(gm, q) != n:
        raise FormatError("generator vector is rank deficient")
    if proposal == "II" and params.v > 0:
        mv = params.m * params.v
        if rank_mod(A[:mv, :mv], q) != mv:
            raise FormatError("mixing matrix has a singular leading block")
    return PrivateKey(proposal, params, basis, g, A)


def decode_ciphertext(blob):
    tag, raw, payload = _parse_header(blob)
    if tag != _TAG_CT:
        raise FormatError("key passed where a ciphertext was expected")
    proposal, params = _params_for(tag, raw)
    y, rest = _grid(payload, 1, params.N, params.q, "ciphertext body")
    if rest:
        raise FormatError("trailing bytes after ciphertext body")
    return Ciphertext(proposal, params, y[0])
