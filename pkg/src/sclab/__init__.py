"""Numerical lab for linear-readout floors, threshold recovery and capacity
reference scales of feature codes in superposition."""

__version__ = "0.1.0"

from .codes import (  # noqa: E402
    Code,
    CodeCertificate,
    basis_union_code,
    certify,
    identity_code,
    random_unit_code,
    tight_frame_code,
)
from .kernels import TilePlan, gemm_tile, least_squares_rows, offdiag_stats  # noqa: E402
from .readouts import (  # noqa: E402
    Readout,
    crosstalk,
    delta_floor_check,
    empirical_delta,
    least_squares_readout,
    rescale_to_unit_diagonal,
    transpose_readout,
)
from .sparse import (  # noqa: E402
    NoiseSpec,
    SparseState,
    encode,
    linear_energy,
    recovery_certificate,
    threshold_decode,
)

__all__ = [
    "Code",
    "CodeCertificate",
    "NoiseSpec",
    "Readout",
    "SparseState",
    "TilePlan",
    "basis_union_code",
    "certify",
    "crosstalk",
    "delta_floor_check",
    "empirical_delta",
    "encode",
    "gemm_tile",
    "identity_code",
    "least_squares_readout",
    "least_squares_rows",
    "linear_energy",
    "offdiag_stats",
    "random_unit_code",
    "recovery_certificate",
    "rescale_to_unit_diagonal",
    "threshold_decode",
    "tight_frame_code",
    "transpose_readout",
]
