"""Common eigenspaces of the Hamming scheme H(4, 2).

The eigenvalue table of H(n, 2) is given by Krawtchouk polynomials, and the
multiplicities are binomial coefficients.
"""

import numpy as np

from asq.scheme import hamming_scheme
from asq.spectral import decompose, verify_spectral

s = hamming_scheme(4)
sd = decompose(s)
np.set_printoptions(precision=3, suppress=True)
print("multiplicities:", sd.multiplicities)
print("eigenvalue table theta[k, i]:")
print(sd.eigentable)
print(verify_spectral(s, sd).format_table())
