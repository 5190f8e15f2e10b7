"""alpha, alpha_q and the spin-matrix lower bound on the unitary number.

For a pseudocyclic scheme with multiplicity t the unitary construction gives
t^2 d pairwise "independent" unitaries, more than the N = 1 + t d vectors of
the classical certificate.
"""

from asq.channel import operator_system
from asq.field import make_field
from asq.independence import (
    alpha_q,
    bounds_report,
    build_alpha_certificate,
    build_alpha_u_certificate,
    verify_alpha_certificate,
    verify_alpha_q_certificate,
    verify_alpha_u_certificate,
)
from asq.scheme import cyclotomic_scheme
from asq.spectral import decompose

s = cyclotomic_scheme(make_field(17), 4)
sd = decompose(s)
S = operator_system(sd)

a = build_alpha_certificate(sd)
print("alpha   :", a.size, verify_alpha_certificate(a, S).overall)
value, qc = alpha_q(sd)
print("alpha_q :", value, verify_alpha_q_certificate(qc, S).overall)
u = build_alpha_u_certificate(sd, S)
rep = verify_alpha_u_certificate(u, S)
print("alpha_u >=", u.size, rep.overall, f"(max residual {rep.max_residual:.1e})")
print(bounds_report(sd, S).to_dict())
