"""Arithmetic in GF(q) and GF(q^m), bases, and coordinate maps.

Elements of GF(q^m) are coefficient vectors over GF(q) with respect to the
power basis of a fixed monic irreducible modulus. The modulus is the
lexicographically smallest monic irreducible of degree m, comparing
coefficients from the constant term upward, so field construction is fully
deterministic for a given (q, m).

The coordinate isomorphism phi maps GF(q^m)^n row vectors to GF(q)^{nm} with
respect to a basis B, and phi_matrix lifts whole matrices either row-wise
(each entry replaced by its coordinate row) or fully (each entry replaced by
the m x m matrix of multiplication by it, written in B).
"""

from __future__ import annotations

import functools

import numpy as np

from .backend import matmul_mod, rref_mod

__all__ = [
    "PrimeField",
    "ExtField",
    "ExtElem",
    "BasisPair",
    "make_ext_field",
    "frobenius",
    "trace",
    "dual_basis",
    "random_basis",
    "phi",
    "phi_inv",
    "phi_matrix",
]


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The prime field GF(q), q prime and below 2^16.

    Elements are plain ints in [0, q); this class only carries q and
    validates it.
    """

    __slots__ = ("q",)

    def __init__(self, q):
        q = int(q)
        if not (2 <= q < 2**16) or not _is_prime(q):
            raise ValueError(f"q must be a prime in [2, 2^16), got {q}")
        self.q = q

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"


# ---------------------------------------------------------------------------
# polynomial helpers over GF(q), coefficients stored low degree first
# ---------------------------------------------------------------------------


def _poly_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mulmod(a, b, f, q):
    # f monic of degree m; operands of degree < m
    c = np.convolve(a, b) % q
    m = len(f) - 1
    for j in range(len(c) - 1, m - 1, -1):
        coef = c[j]
        if coef:
            c[j - m : j + 1] = (c[j - m : j + 1] - coef * f) % q
    return c[:m]


def _poly_powmod(a, e, f, q):
    m = len(f) - 1
    result = np.zeros(m, dtype=np.int64)
    result[0] = 1
    base = np.array(a[:m], dtype=np.int64) % q
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, f, q)
        base = _poly_mulmod(base, base, f, q)
        e >>= 1
    return result


def _poly_divmod(a, b, q):
    a = list(np.asarray(a, dtype=np.int64) % q)
    b = _poly_trim(list(np.asarray(b, dtype=np.int64) % q))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(int(b[-1]), -1, q)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = a[:]
    for shift in range(len(rem) - len(b), -1, -1):
        coef = (rem[shift + len(b) - 1] * inv_lead) % q
        if coef:
            quot[shift] = coef
            for i, bc in enumerate(b):
                rem[shift + i] = (rem[shift + i] - coef * bc) % q
    return quot, _poly_trim(rem)


def _poly_gcd(a, b, q):
    a = _poly_trim(list(np.asarray(a, dtype=np.int64) % q))
    b = _poly_trim(list(np.asarray(b, dtype=np.int64) % q))
    while b:
        _, r = _poly_divmod(a, b, q)
        a, b = b, list(r)
    return a


def _poly_xgcd_modinv(a, f, q):
    # inverse of a modulo the irreducible f; a nonzero of degree < deg f
    r0, r1 = list(np.asarray(f, dtype=np.int64)), _poly_trim(list(np.asarray(a, dtype=np.int64) % q))
    s0, s1 = [], [1]
    while r1:
        quot, rem = _poly_divmod(r0, r1, q)
        r0, r1 = r1, list(rem)
        prod = np.convolve(np.asarray(quot, dtype=np.int64), np.asarray(s1, dtype=np.int64)) % q
        new_s = np.zeros(max(len(s0), len(prod)), dtype=np.int64)
        if s0:
            new_s[: len(s0)] += np.asarray(s0, dtype=np.int64)
        new_s[: len(prod)] -= prod
        s0, s1 = s1, list(new_s % q)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = pow(int(r0[0]), -1, q)
    out = np.zeros(len(f) - 1, dtype=np.int64)
    s = (np.asarray(s0, dtype=np.int64) * c) % q
    out[: len(s)] = s
    return out


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f, q):
    """Rabin's test: f monic of degree m is irreducible over GF(q) iff
    x^(q^m) = x mod f and gcd(x^(q^(m/p)) - x, f) = 1 for every prime p | m."""
    m = len(f) - 1
    if m == 1:
        return True
    x = np.zeros(m, dtype=np.int64)
    x[1] = 1
    for p in _prime_factors(m):
        h = _poly_powmod(x, q ** (m // p), f, q)
        h = (h - x) % q
        g = _poly_gcd(h, f, q)
        if len(g) != 1:
            return False
    h = _poly_powmod(x, q**m, f, q)
    return bool(np.array_equal(h, x))


@functools.lru_cache(maxsize=None)
def _find_modulus(q, m):
    """Lexicographically smallest monic irreducible of degree m over GF(q),
    coefficients compared low degree first."""
    if m == 1:
        # every monic linear is irreducible; smallest is x itself
        return (0, 1)
    # the constant term of an irreducible is nonzero for m >= 2 (else x | f),
    # so the scan starts at c0 = 1; within fixed low coefficients the
    # highest index varies fastest (lexicographic order, c0 most significant)
    for c0 in range(1, q):
        for rest in range(q ** (m - 1)):
            coeffs = np.zeros(m + 1, dtype=np.int64)
            coeffs[0] = c0
            coeffs[m] = 1
            v = rest
            for idx in range(m - 1, 0, -1):
                coeffs[idx] = v % q
                v //= q
            if _is_irreducible(coeffs, q):
                return tuple(int(c) for c in coeffs)
    raise RuntimeError(f"no irreducible of degree {m} over GF({q})")  # unreachable


class ExtElem:
    """An element of an ExtField, as an immutable coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        c = np.asarray(coeffs, dtype=np.int64) % field.q
        if c.shape != (field.m,):
            raise ValueError(f"expected {field.m} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        self.coeffs = c

    def _check(self, other):
        if self.field.key != other.field.key:
            raise ValueError("elements belong to different fields")

    def __add__(self, other):
        if not isinstance(other, ExtElem):
            return NotImplemented
        self._check(other)
        return ExtElem(self.field, (self.coeffs + other.coeffs) % self.field.q)

    def __sub__(self, other):
        if not isinstance(other, ExtElem):
            return NotImplemented
        self._check(other)
        return ExtElem(self.field, (self.coeffs - other.coeffs) % self.field.q)

    def __neg__(self):
        return ExtElem(self.field, (-self.coeffs) % self.field.q)

    def __mul__(self, other):
        if isinstance(other, ExtElem):
            self._check(other)
            return ExtElem(self.field, self.field._mul_coeffs(self.coeffs, other.coeffs))
        if isinstance(other, (int, np.integer)):
            return ExtElem(self.field, (self.coeffs * int(other)) % self.field.q)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ExtElem):
            return NotImplemented
        return self * other.inv()

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one()
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return ExtElem(self.field, _poly_xgcd_modinv(self.coeffs, self.field.modulus, self.field.q))

    def frob(self, i=1):
        """Frobenius power a^(q^i); i may be negative (taken mod m)."""
        return ExtElem(self.field, (self.coeffs @ self.field._frob[i % self.field.m]) % self.field.q)

    def trace(self):
        return int((self.coeffs @ self.field._trace_vec) % self.field.q)

    def __bool__(self):
        return bool(self.coeffs.any())

    def __eq__(self, other):
        return (
            isinstance(other, ExtElem)
            and other.field.key == self.field.key
            and np.array_equal(other.coeffs, self.coeffs)
        )

    def __hash__(self):
        return hash((self.field.key, self.coeffs.tobytes()))

    def __repr__(self):
        return f"ExtElem({list(int(c) for c in self.coeffs)})"


class ExtField:
    """GF(q^m) with a fixed deterministic modulus.

    Construct through make_ext_field so instances are cached and shared;
    elements compare equal only within the same (q, m, modulus).
    """

    def __init__(self, q, m, _modulus=None):
        self.base = PrimeField(q)
        self.q = self.base.q
        m = int(m)
        if not (1 <= m <= 128):
            raise ValueError(f"m must be in [1, 128], got {m}")
        self.m = m
        if _modulus is None:
            _modulus = _find_modulus(self.q, m)
        self.modulus = np.array(_modulus, dtype=np.int64)
        self.modulus.flags.writeable = False
        self.key = (self.q, self.m, tuple(int(c) for c in self.modulus))
        self._build_tables()

    def _build_tables(self):
        q, m = self.q, self.m
        # reduction rows: _red[j] = coords of x^(m+j) mod modulus
        red = np.zeros((max(m - 1, 0), m), dtype=np.int64)
        r = (-self.modulus[:m]) % q  # x^m mod f
        base_row = r.copy()
        for j in range(m - 1):
            red[j] = r
            r = np.roll(r, 1)
            hi = r[0]
            r[0] = 0
            r = (r + hi * base_row) % q
        self._red = red
        # Frobenius matrices: coords(a^(q^i)) = coords(a) @ _frob[i];
        # row j of _frob[1] is coords((x^j)^q) = coords((x^q)^j)
        if m == 1:
            xq = np.ones(1, dtype=np.int64)
        else:
            xq = _poly_powmod(np.eye(1, m, 1, dtype=np.int64)[0], q, self.modulus, q)
        f1 = np.zeros((m, m), dtype=np.int64)
        row = np.zeros(m, dtype=np.int64)
        row[0] = 1
        for j in range(m):
            f1[j] = row
            if j < m - 1:
                row = _poly_mulmod(row, xq, self.modulus, q)
        self._frob = [np.eye(m, dtype=np.int64)]
        acc = np.eye(m, dtype=np.int64)
        for _ in range(1, m):
            acc = matmul_mod(acc, f1, q)
            self._frob.append(acc)
        # trace of the power basis; the full trace map lands in GF(q)
        total = np.zeros((m, m), dtype=np.int64)
        for fi in self._frob:
            total = (total + fi) % q
        if m > 1 and total[:, 1:].any():
            raise AssertionError("trace map does not land in the base field")
        self._trace_vec = total[:, 0].copy()
        self._trace_vec.flags.writeable = False

    # -- element constructors ------------------------------------------------

    def elem(self, coeffs):
        c = np.zeros(self.m, dtype=np.int64)
        a = np.asarray(coeffs, dtype=np.int64)
        if a.ndim != 1 or a.shape[0] > self.m:
            raise ValueError("bad coefficient vector")
        c[: a.shape[0]] = a
        return ExtElem(self, c)

    def zero(self):
        return ExtElem(self, np.zeros(self.m, dtype=np.int64))

    def one(self):
        c = np.zeros(self.m, dtype=np.int64)
        c[0] = 1
        return ExtElem(self, c)

    def gen(self):
        """The class of x (equals the power-basis element of degree 1)."""
        c = np.zeros(self.m, dtype=np.int64)
        c[min(1, self.m - 1)] = 1
        return ExtElem(self, c)

    def from_int(self, i):
        """Element whose coefficients are the base-q digits of i, low first."""
        c = np.zeros(self.m, dtype=np.int64)
        i = int(i)
        for j in range(self.m):
            c[j] = i % self.q
            i //= self.q
        if i:
            raise ValueError("integer out of range for this field")
        return ExtElem(self, c)

    def random(self, rng):
        return ExtElem(self, rng.integers(0, self.q, size=self.m))

    def order(self):
        return self.q**self.m

    def mult_matrix(self, a):
        """m x m matrix M over F_q with coords(a*b) = coords(b) @ M, in the
        power basis. The F_q-linear picture of multiplication by a."""
        if a.field != self:
            raise ValueError("element from a different field")
        return self._mult_matrix_power_basis(a.coeffs)

    def frob_matrix(self, i=1):
        """m x m matrix F over F_q with coords(a^(q^i)) = coords(a) @ F."""
        return self._frob[i % self.m].copy()

    # -- coefficient-level arithmetic ---------------------------------------

    def _mul_coeffs(self, a, b):
        c = np.convolve(a, b)
        lo = c[: self.m].copy()
        if c.shape[0] > self.m:
            hi = c[self.m :]
            lo = lo + hi @ self._red[: hi.shape[0]]
        return lo % self.q

    def _mult_matrix_power_basis(self, coeffs):
        """Rows j = coords(x^j * a) for the power basis; multiplication by a."""
        m = self.m
        out = np.zeros((m, m), dtype=np.int64)
        row = np.asarray(coeffs, dtype=np.int64) % self.q
        base_row = (-self.modulus[:m]) % self.q
        for j in range(m):
            out[j] = row
            if j < m - 1:
                hi = row[m - 1]
                row = np.roll(row, 1)
                row[0] = 0
                if hi:
                    row = (row + hi * base_row) % self.q
        return out

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"ExtField(GF({self.q}^{self.m}))"


@functools.lru_cache(maxsize=None)
def make_ext_field(q, m):
    """GF(q^m) with the deterministic smallest modulus; cached per (q, m)."""
    return ExtField(q, m)


def frobenius(a, i=1):
    """a^(q^i) for a in GF(q^m); negative i means the inverse map."""
    return a.frob(i)


def trace(a):
    """Trace of a into GF(q), as an int: sum of a^(q^i) over i in [0, m)."""
    return a.trace()


# ---------------------------------------------------------------------------
# bases and coordinate maps
# ---------------------------------------------------------------------------


class BasisPair:
    """A basis of GF(q^m) over GF(q) together with its trace-dual basis.

    P holds the primal coordinate rows (P[i] = power-basis coords of the i-th
    basis element); Pinv maps power-basis coordinates to B-coordinates, and
    Pdual holds the dual basis rows, so Tr(primal_i * dual_j) = delta_ij.
    """

    __slots__ = ("field", "primal", "dual", "P", "Pinv", "Pdual")

    def __init__(self, field, primal_rows):
        self.field = field
        q, m = field.q, field.m
        P = np.asarray(primal_rows, dtype=np.int64) % q
        if P.shape != (m, m):
            raise ValueError("basis needs m coordinate rows of length m")
        # the augmented matrix always has full rank; P is invertible exactly
        # when the pivots stay in the left half
        aug, _, pivots = rref_mod(np.hstack([P, np.eye(m, dtype=np.int64)]), q)
        if list(pivots) != list(range(m)):
            raise ValueError("basis elements are linearly dependent")
        self.P = P
        self.Pinv = aug[:, m:]
        # Gram matrix of the trace form on monomials: T[u, v] = Tr(x^(u+v))
        mono = np.zeros(2 * m - 1, dtype=np.int64)
        for j in range(2 * m - 1):
            if j < m:
                c = np.zeros(m, dtype=np.int64)
                c[j] = 1
            else:
                c = field._red[j - m].copy()
            mono[j] = int((c @ field._trace_vec) % q)
        gram = np.empty((m, m), dtype=np.int64)
        for u in range(m):
            gram[u] = mono[u : u + m]
        w = matmul_mod(P, gram, q)
        aug, _, pivots = rref_mod(np.hstack([w, np.eye(m, dtype=np.int64)]), q)
        if list(pivots) != list(range(m)):
            raise AssertionError("trace form degenerate")  # impossible for separable ext
        self.Pdual = aug[:, m:].T.copy()
        self.primal = tuple(ExtElem(field, row) for row in P)
        self.dual = tuple(ExtElem(field, row) for row in self.Pdual)

    def __repr__(self):
        return f"BasisPair(GF({self.field.q}^{self.field.m}))"


def dual_basis(field, primal):
    """BasisPair for the given primal basis (sequence of m ExtElems or an
    m x m coordinate array); raises ValueError on dependent input."""
    if len(primal) and isinstance(primal[0], ExtElem):
        rows = np.stack([e.coeffs for e in primal])
    else:
        rows = np.asarray(primal, dtype=np.int64)
    return BasisPair(field, rows)


def random_basis(field, rng):
    """Uniformly random basis: a random invertible coordinate matrix applied
    to the power basis."""
    m, q = field.m, field.q
    while True:
        P = rng.integers(0, q, size=(m, m))
        if rref_mod(P, q)[1] == m:
            return BasisPair(field, P)


def _coeff_rows(v):
    if isinstance(v, ExtElem):
        return v.coeffs[None, :], v.field
    elems = list(np.asarray(v, dtype=object).ravel()) if not isinstance(v, (list, tuple)) else list(v)
    if not elems:
        raise ValueError("empty vector")
    return np.stack([e.coeffs for e in elems]), elems[0].field


def phi(basis, v):
    """Coordinate row of v in basis B: GF(q^m)^n -> GF(q)^(nm).

    v may be a single ExtElem, a sequence of them, or an object array; the
    result is a flat int64 vector of B-coordinates, n blocks of length m.
    """
    rows, field = _coeff_rows(v)
    out = matmul_mod(rows, basis.Pinv, field.q)
    return out.reshape(-1)


def phi_inv(basis, w):
    """Inverse of phi: a flat GF(q) vector of length n*m back to n ExtElems
    (returned as a 1-D object array)."""
    field = basis.field
    w = np.asarray(w, dtype=np.int64) % field.q
    if w.ndim != 1 or w.shape[0] % field.m:
        raise ValueError("length must be a multiple of m")
    blocks = matmul_mod(w.reshape(-1, field.m), basis.P, field.q)
    out = np.empty(blocks.shape[0], dtype=object)
    for i in range(blocks.shape[0]):
        out[i] = ExtElem(field, blocks[i])
    return out


def phi_matrix(basis, M, mode="full-expand"):
    """Matrix form of the coordinate map.

    mode="row-expand": each entry of the r x c matrix M becomes its length-m
    coordinate row, giving an r x cm matrix whose rows are phi of M's rows.

    mode="full-expand": each entry a becomes the m x m matrix of
    multiplication by a written in B (row i equals phi(B, a * primal_i)),
    giving an rm x cm matrix. A single ExtElem is accepted as a 1 x 1 matrix,
    returning its m x m block. Phi of a product of matrices equals the
    product of the phis (multiplicativity), which is what makes expanded
    parity checks compose with expanded generators.
    """
    field = basis.field
    q, m = field.q, field.m
    single = isinstance(M, ExtElem)
    if single:
        M = np.array([[M]], dtype=object)
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix of ExtElems")
    r, c = M.shape
    if mode == "row-expand":
        coeffs = np.zeros((r, c, m), dtype=np.int64)
        for i in range(r):
            for j in range(c):
                coeffs[i, j] = M[i, j].coeffs
        out = matmul_mod(coeffs.reshape(r * c, m), basis.Pinv, q)
        return out.reshape(r, c * m)
    if mode != "full-expand":
        raise ValueError(f"unknown mode {mode!r}")
    mults = np.zeros((r * c, m, m), dtype=np.int64)
    idx = 0
    for i in range(r):
        for j in range(c):
            mults[idx] = field._mult_matrix_power_basis(M[i, j].coeffs)
            idx += 1
    blocks = (basis.P[None] @ mults @ basis.Pinv[None]) % q
    return blocks.reshape(r, c, m, m).transpose(0, 2, 1, 3).reshape(r * m, c * m)
