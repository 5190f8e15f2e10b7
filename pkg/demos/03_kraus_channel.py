"""Normalize the adjacency matrices into a CPTP channel and push states through it."""

import numpy as np

from asq.channel import (
    apply_channel,
    normalize_kraus,
    operator_system,
    random_density,
    verify_channel,
)
from asq.field import make_field
from asq.scheme import cyclotomic_scheme
from asq.spectral import decompose

s = cyclotomic_scheme(make_field(13), 3)
sd = decompose(s)
ch = normalize_kraus(s, sd)
S = operator_system(sd)
print(verify_channel(ch, S).format_table())

rng = np.random.default_rng(0)
for rank in (1, 4, 13):
    out = apply_channel(ch, random_density(s.n, rng, rank))
    r = out.residuals()
    print(f"rank {rank:2d} input: trace error {r['trace']:.1e}, negativity {r['negativity']:.1e}")
