"""Quantum channels from association schemes and their independence numbers."""

__version__ = "0.1.0"

from .channel import (
    DensityOperator,
    KrausChannel,
    OperatorSystem,
    apply_channel,
    in_s_perp,
    normalize_kraus,
    operator_system,
    random_density,
)
from .field import FieldCtx, FieldElement, PrimePower, cyclotomic_class, make_field
from .independence import (
    AlphaCertificate,
    AlphaQCertificate,
    AlphaUCertificate,
    BoundsReport,
    SpinBasis,
    alpha_q,
    bounds_report,
    build_alpha_certificate,
    build_alpha_u_certificate,
    spin_basis,
    verify_alpha_certificate,
    verify_alpha_q_certificate,
    verify_alpha_u_certificate,
)
from .matkernel import complete_to_unitary, herm_eig, hs_inner, numeric_rank
from .report import Check, VerificationReport
from .scheme import (
    AssociationScheme,
    IntersectionNumbers,
    adjacency_matrix,
    cyclotomic_scheme,
    hamming_scheme,
    intersection_numbers,
    load_scheme,
    one_class_scheme,
    save_scheme,
    verify_axioms,
)
from .spectral import (
    PseudocyclicProfile,
    SpectralData,
    decompose,
    eigenvalue_products,
    pseudocyclic_profile,
)
