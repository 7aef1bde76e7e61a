"""Rank-metric public-key toolkit built on expanded Gabidulin codes.

Modules
-------
gf
    Extension fields GF(q^m), Frobenius, bases and the coordinate maps.
matq
    Dense linear algebra over F_q and over GF(q^m) (rref, kernels, solving).
gabidulin
    Gabidulin codes, rank weights, the syndrome decoder, distance oracles.
expand
    Base-field expansion of a parent code and the four-step decoder.
pke
    The two encryption proposals, key generation and the wire formats.
analysis
    Sum-of-powers distinguisher, MinRank reduction, cost and key-size
    estimators with the bundled reference parameter rows.
cli
    Batch command-line front end (also installed as the `xgab` script).
"""

from . import analysis, cli, expand, gabidulin, gf, matq, pke
from .analysis import distinguish, reference_table_csv, security_report
from .backend import backend_name
from .errors import (
    DecodeFailure,
    DecryptFailure,
    FormatError,
    NotSystematic,
    ParameterError,
    XgabError,
)
from .expand import decode_expanded, expand_code
from .gabidulin import decode_syndrome, make_gabidulin, rank_weight
from .gf import dual_basis, make_ext_field, phi, phi_inv, phi_matrix, random_basis
from .pke import (
    ParamsI,
    ParamsII,
    decode_ciphertext,
    decode_key,
    decrypt_i,
    decrypt_ii,
    encode_ciphertext,
    encode_key,
    encrypt_i,
    encrypt_ii,
    keygen_i,
    keygen_ii,
)

__version__ = "0.1.0"
