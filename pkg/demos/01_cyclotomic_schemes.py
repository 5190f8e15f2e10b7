"""Build a few cyclotomic schemes and check the scheme axioms.

Run with ``python3 demos/01_cyclotomic_schemes.py``.
"""

from asq import make_field
from asq.scheme import cyclotomic_scheme, intersection_numbers, verify_axioms

for q, d in [(5, 2), (9, 2), (13, 3), (17, 4)]:
    ctx = make_field(*{9: (3, 2)}.get(q, (q, 1)))
    s = cyclotomic_scheme(ctx, d)
    rep = verify_axioms(s)
    print(f"{s!r}: axioms {'ok' if rep.overall else 'FAILED'}, valencies {list(s.valencies)}")

# intersection numbers p^k_ij of the Paley scheme on GF(13)
s = cyclotomic_scheme(make_field(13), 2)
p = intersection_numbers(s).p
for k in range(3):
    print(f"k={k}:\n{p[:, :, k]}")
