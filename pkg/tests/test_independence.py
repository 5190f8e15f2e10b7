import numpy as np
import pytest

from asq.channel import DensityOperator, normalize_kraus, operator_system
from asq.errors import DimMismatch, FormatError, NotPseudocyclic, TSmall
from asq.field import make_field
from asq.independence import (
    AlphaCertificate,
    AlphaQCertificate,
    AlphaUCertificate,
    alpha_q,
    block_condition_residual,
    bounds_report,
    build_alpha_certificate,
    build_alpha_u_certificate,
    cert_from_dict,
    cert_to_dict,
    kraus_scalar_residual,
    spin_basis,
    verify_alpha_certificate,
    verify_alpha_q_certificate,
    verify_alpha_u_certificate,
)
from asq.matkernel import hs_inner, numeric_rank, unitarity_residual
from asq.scheme import cyclotomic_scheme, hamming_scheme, one_class_scheme
from asq.spectral import decompose

from conftest import small_schemes


def setup(s):
    sd = decompose(s)
    return sd, operator_system(sd)


# -- alpha


def test_alpha_one_class_three():
    sd, S = setup(one_class_scheme(3))
    cert = build_alpha_certificate(sd)
    assert cert.size == 3
    assert np.allclose(cert.vectors[0], np.ones(3) / np.sqrt(3))
    assert np.allclose(cert.vectors[1:].sum(axis=1), 0)
    assert verify_alpha_certificate(cert, S).overall


def test_alpha_paley(paley5_sd):
    S = operator_system(paley5_sd)
    rep = verify_alpha_certificate(build_alpha_certificate(paley5_sd), S)
    assert rep.overall and rep.max_residual <= 1e-9
    assert rep.metadata["size"] == 5


def test_alpha_cyc13(cyc13_3):
    sd, S = setup(cyc13_3)
    cert = build_alpha_certificate(sd)
    assert cert.size == 13 and verify_alpha_certificate(cert, S).overall


def test_alpha_repeated_vector_fails(paley5_sd):
    S = operator_system(paley5_sd)
    v = paley5_sd.eigenbasis[1]
    rep = verify_alpha_certificate(AlphaCertificate(np.array([v, v], dtype=complex)), S)
    assert not rep.overall
    assert rep["orthogonality"].max_residual == pytest.approx(1.0)


def test_alpha_same_eigenspace_subcertificate(paley5_sd):
    S = operator_system(paley5_sd)
    cert = AlphaCertificate(paley5_sd.block(1).astype(complex))
    assert cert.size == 2 and verify_alpha_certificate(cert, S).overall


def test_alpha_oversized_rejected(paley5_sd):
    S = operator_system(paley5_sd)
    vecs = np.vstack([paley5_sd.eigenbasis, paley5_sd.eigenbasis[:1]])
    rep = verify_alpha_certificate(AlphaCertificate(vecs), S)
    assert not rep["size_le_dim"].passed


def test_alpha_generic_basis_fails(paley5_sd):
    # the standard basis is orthonormal but its cross terms are not in S-perp
    S = operator_system(paley5_sd)
    rep = verify_alpha_certificate(AlphaCertificate(np.eye(5, dtype=complex)), S)
    assert rep["orthogonality"].passed and not rep["s_perp"].passed


def test_alpha_dim_mismatch(paley5_sd):
    with pytest.raises(DimMismatch):
        verify_alpha_certificate(AlphaCertificate(np.eye(4)), operator_system(paley5_sd))


# -- alpha_q


def test_alpha_q_paley(paley5_sd):
    S = operator_system(paley5_sd)
    value, cert = alpha_q(paley5_sd)
    assert value == 2 and cert.eigenspaces == (1,)
    assert np.allclose(cert.projector, paley5_sd.idempotents[1])
    rep = verify_alpha_q_certificate(cert, S)
    assert rep.overall
    assert np.allclose(cert.scalars, [0, 1, 0])
    assert np.allclose(np.array(rep.metadata["scalars"])[:, 0], [0, 1, 0])


def test_alpha_q_hamming4(hamming4):
    sd, S = setup(hamming4)
    value, cert = alpha_q(sd)
    assert value == 6 and verify_alpha_q_certificate(cert, S).overall


@pytest.mark.parametrize("n", [2, 4, 7])
def test_alpha_q_one_class(n):
    sd, S = setup(one_class_scheme(n))
    value, cert = alpha_q(sd)
    assert value == n - 1
    # for n = 2 both ranks are 1 and the tie goes to E_0 = J / 2
    expected = np.ones((n, n)) / n if n == 2 else np.eye(n) - np.ones((n, n)) / n
    assert np.allclose(cert.projector, expected)


def test_alpha_q_identity_fails(paley5_sd):
    S = operator_system(paley5_sd)
    rep = verify_alpha_q_certificate(AlphaQCertificate(np.eye(5), 5, ()), S)
    assert not rep.overall and not rep["scalar_action"].passed


def test_alpha_q_rank_one_passes(paley5_sd):
    S = operator_system(paley5_sd)
    v = paley5_sd.eigenbasis[3]
    rep = verify_alpha_q_certificate(AlphaQCertificate(np.outer(v, v), 1, ()), S)
    assert rep.overall


def test_alpha_q_non_projector_fails(paley5_sd):
    S = operator_system(paley5_sd)
    rep = verify_alpha_q_certificate(AlphaQCertificate(2 * paley5_sd.idempotents[1], 2, ()), S)
    assert not rep["idempotent"].passed


@pytest.mark.parametrize("s", small_schemes(), ids=repr)
def test_alpha_q_matches_max_rank_and_scalar_action(s):
    sd, S = setup(s)
    value, cert = alpha_q(sd)
    assert value == max(numeric_rank(E) for E in sd.idempotents)
    assert value <= s.n
    ch = normalize_kraus(s, sd)
    assert kraus_scalar_residual(ch, cert.projector) <= 1e-9


# -- spin basis


def test_spin_basis_t1():
    sb = spin_basis(1)
    assert len(sb) == 1 and np.array_equal(sb.mats[0], [[1]])


def test_spin_basis_t2_explicit():
    sb = spin_basis(2)
    assert np.allclose(sb[0, 0], np.eye(2))
    assert np.allclose(sb[0, 1], [[0, 1], [1, 0]])
    assert np.allclose(sb[1, 0], [[1, 0], [0, -1]])
    assert np.allclose(sb[1, 1], [[0, 1], [-1, 0]])


def test_spin_basis_definition_t3():
    t = 3
    sb = spin_basis(t)
    omega = np.exp(2j * np.pi / t)
    for j in range(t):
        for k in range(t):
            M = np.zeros((t, t), dtype=complex)
            for r in range(t):
                M[r, (r + k) % t] += omega ** (j * r)
            assert np.allclose(sb[j, k], M)


@pytest.mark.parametrize("t", range(1, 17))
def test_spin_basis_orthogonality(t):
    mats = spin_basis(t).mats
    assert max(unitarity_residual(U) for U in mats) <= 1e-12
    gram = np.array([[hs_inner(X, Y) for Y in mats] for X in mats]) if t <= 4 else None
    G = mats.reshape(t * t, -1) @ mats.reshape(t * t, -1).conj().T
    assert np.max(np.abs(G - t * np.eye(t * t))) <= 1e-10
    if gram is not None:
        assert np.allclose(gram, G)


# -- alpha_u


@pytest.mark.parametrize(
    "make,expected,alpha",
    [
        (lambda: cyclotomic_scheme(make_field(5), 2), 8, 5),
        (lambda: cyclotomic_scheme(make_field(13), 3), 48, 13),
        (lambda: one_class_scheme(4), 9, 4),
        (lambda: cyclotomic_scheme(make_field(3, 2), 2), 32, 9),
    ],
)
def test_alpha_u_certificates(make, expected, alpha):
    sd, S = setup(make())
    cert = build_alpha_u_certificate(sd, S)
    assert cert.size == expected and expected > alpha
    rep = verify_alpha_u_certificate(cert, S)
    assert rep.overall and rep.max_residual <= 1e-9
    assert block_condition_residual(cert.block_data, sd.multiplicities) <= 1e-12
    # W^H U_m V recovers the block matrix
    t = cert.block_data.shape[1]
    V = sd.eigenbasis.T
    for m in range(0, cert.size, 7):
        assert np.allclose(cert.unitaries[m][:t] @ V, cert.block_data[m])


def test_alpha_u_condition_direct_trace(paley5_sd):
    S = operator_system(paley5_sd)
    cert = build_alpha_u_certificate(paley5_sd, S)
    rho = cert.rho.mat
    worst = 0.0
    for a, Ua in enumerate(cert.unitaries):
        for b, Ub in enumerate(cert.unitaries):
            if a != b:
                for E in S.basis:
                    worst = max(worst, abs(np.trace(Ub.conj().T @ rho @ Ua @ E)))
    assert worst < 1e-12


def test_alpha_u_duplicate_fails(paley5_sd):
    S = operator_system(paley5_sd)
    cert = build_alpha_u_certificate(paley5_sd, S)
    U = np.array(cert.unitaries)
    U[1] = U[0]
    rep = verify_alpha_u_certificate(AlphaUCertificate(cert.rho, U), S)
    assert rep["unitarity"].passed and not rep["s_perp"].passed


def test_alpha_u_non_unitary_fails(paley5_sd):
    S = operator_system(paley5_sd)
    cert = build_alpha_u_certificate(paley5_sd, S)
    U = np.array(cert.unitaries)
    U[3] = 2 * U[3]
    rep = verify_alpha_u_certificate(AlphaUCertificate(cert.rho, U), S)
    assert not rep["unitarity"].passed


def test_alpha_u_bad_state_fails(paley5_sd):
    S = operator_system(paley5_sd)
    cert = build_alpha_u_certificate(paley5_sd, S)
    rep = verify_alpha_u_certificate(AlphaUCertificate(DensityOperator(np.eye(5)), cert.unitaries), S)
    assert not rep["rho_trace"].passed


def test_alpha_u_preconditions(hamming4):
    sd, S = setup(hamming4)
    with pytest.raises(NotPseudocyclic):
        build_alpha_u_certificate(sd, S)
    sd, S = setup(one_class_scheme(2))
    with pytest.raises(TSmall):
        build_alpha_u_certificate(sd, S)


# -- bounds


def test_bounds_paley(paley5_sd):
    b = bounds_report(paley5_sd, operator_system(paley5_sd))
    assert (b.alpha_q, b.alpha, b.alpha_u_lower) == (2, 5, 8)
    assert b.alpha_u_upper_trivial == 1 + (25 - 3)
    assert b.ratio == pytest.approx(0.32)
    assert b.ordering_checks().overall


def test_bounds_one_class_two():
    sd, S = setup(one_class_scheme(2))
    b = bounds_report(sd, S)
    assert (b.alpha_q, b.alpha) == (1, 2)
    assert b.ratio is None and b.t == 1
    assert b.alpha_u_lower == 2  # alpha itself is the trivial lower bound
    assert b.ordering_checks().overall


def test_bounds_gf17_d4():
    sd, S = setup(cyclotomic_scheme(make_field(17), 4))
    b = bounds_report(sd, S)
    assert (b.alpha_q, b.alpha, b.alpha_u_lower, b.D**2) == (4, 17, 64, 289)


def test_bounds_hamming(hamming4):
    sd, S = setup(hamming4)
    b = bounds_report(sd, S)
    assert (b.alpha_q, b.alpha, b.alpha_u_lower) == (6, 16, 16) and not b.pseudocyclic


# -- certificate files


def test_certificate_round_trip(paley5_sd):
    S = operator_system(paley5_sd)
    certs = [
        build_alpha_certificate(paley5_sd),
        alpha_q(paley5_sd)[1],
        build_alpha_u_certificate(paley5_sd, S),
    ]
    for cert in certs:
        doc = cert_to_dict(cert, 1234)
        assert doc["format"] == "asq-cert" and doc["scheme_hash"] == 1234
        back, h = cert_from_dict(doc)
        assert h == 1234 and type(back) is type(cert)
    back, _ = cert_from_dict(cert_to_dict(certs[2], 1))
    assert np.array_equal(back.unitaries, certs[2].unitaries)
    assert verify_alpha_u_certificate(back, S).overall


@pytest.mark.parametrize(
    "doc",
    [
        {"format": "nope"},
        {"format": "asq-cert", "kind": "beta", "scheme_hash": 1},
        {"format": "asq-cert", "kind": "alpha", "scheme_hash": "x", "vectors": []},
        {"format": "asq-cert", "kind": "alpha", "scheme_hash": 1},
    ],
)
def test_malformed_certificates(doc):
    with pytest.raises(FormatError):
        cert_from_dict(doc)
