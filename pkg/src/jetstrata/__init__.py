"""Jet strata of coisotropic maps: tau tensors, the spaces T_s, Psi-charts and bounds."""

from .errors import (
    ChartDomainError,
    ConfigurationTooLarge,
    DimensionMismatch,
    DomainError,
    IdentityViolation,
    InconsistentSystem,
    JetStrataError,
)
from .symplectic import SymplecticSpace
from .tensors import MultiTensor, SymTensor
from .tau import tau_build
from .symgroup import GroupAlgebraElement, idempotent_pair, t_dim, t_space_basis
from .strata import JetPoint, psi_chart, stratum_codim, stratum_member, tau_tilde
from .embeddings import EmbeddingSpec, classify_point
from .bounds import min_r, min_r_simplified

__version__ = "0.1.0"
