"""Named worked-example matrices, written out entry by entry.

The literal matrices are kept independent of the constructors so that the
constructors can be checked against them.
"""

import numpy as np

from .constructors import CirculantSpec, OmegaCertificate, Parity

SQRT3 = np.sqrt(3.0)

# 3x3 matrix with row sums of modulus 1/10 and unequal phases
ROTATED_A = np.array(
    [
        [1j / 20, 0, 1j / 20],
        [-1j / 20, -1j / 20, 0],
        [0, (1 + 1j * SQRT3) / 40, (1 + 1j * SQRT3) / 40],
    ],
    dtype=np.complex128,
)
ROTATED_A_DOMINANT_EIGENVALUE = 0.0488352 + 0.0447302j
ROTATED_A_PHASES = np.array([np.pi / 2, -np.pi / 2, np.pi / 3])
HALF_STOCHASTIC = np.array([[0.5, 0, 0.5], [0.5, 0.5, 0], [0, 0.5, 0.5]], dtype=np.complex128)

_z = (0.5 - SQRT3 * 0.5j) / 10
ODD_EXAMPLE_LITERAL = np.array(
    [
        [_z, np.conj(_z), 0.9],
        [0.9, _z, np.conj(_z)],
        [np.conj(_z), 0.9, _z],
    ]
)
ODD_EXAMPLE = CirculantSpec(Parity.ODD, a=1 / 20, b=-SQRT3 / 20, alpha1=9 / 10)
ODD_EXAMPLE_SINGULAR_VALUES = (1.0, 1.0, 0.7)

EVEN_EXAMPLE_LITERAL = np.array(
    [
        [1 - 0.5j, 1 + 0.5j, 1 / 3 - 1j / 6, 1 / 3 + 1j / 6],
        [1 / 3 + 1j / 6, 1 - 0.5j, 1 + 0.5j, 1 / 3 - 1j / 6],
        [1 / 3 - 1j / 6, 1 / 3 + 1j / 6, 1 - 0.5j, 1 + 0.5j],
        [1 + 0.5j, 1 / 3 - 1j / 6, 1 / 3 + 1j / 6, 1 - 0.5j],
    ]
)
EVEN_EXAMPLE = CirculantSpec(Parity.EVEN, a=1.0, b=-0.5, alphas=(1 / 3,))

# a < |b|: row sum 8 but spectral norm 16
EVEN_COUNTEREXAMPLE_LITERAL = np.array(
    [
        [1 + 2j, 1 - 2j, 3 + 6j, 3 - 6j],
        [3 - 6j, 1 + 2j, 1 - 2j, 3 + 6j],
        [3 + 6j, 3 - 6j, 1 + 2j, 1 - 2j],
        [1 - 2j, 3 + 6j, 3 - 6j, 1 + 2j],
    ]
)
EVEN_COUNTEREXAMPLE = CirculantSpec(Parity.EVEN, a=1.0, b=2.0, alphas=(3.0,))

STOCHASTIC_ADDEND = np.array(
    [
        [1 / 4, 0, 3 / 8, 3 / 8],
        [1 / 4, 0, 3 / 8, 3 / 8],
        [1 / 4, 1 / 2, 5 / 32, 3 / 32],
        [1 / 4, 1 / 2, 3 / 32, 5 / 32],
    ],
    dtype=np.complex128,
)
# even example plus the addend: non-normal, row sums and norm 11/3
SUM_EXAMPLE_LITERAL = np.array(
    [
        [5 / 4 - 0.5j, 1 + 0.5j, 17 / 24 - 1j / 6, 17 / 24 + 1j / 6],
        [7 / 12 + 1j / 6, 1 - 0.5j, 11 / 8 + 0.5j, 17 / 24 - 1j / 6],
        [7 / 12 - 1j / 6, 5 / 6 + 1j / 6, 37 / 32 - 0.5j, 35 / 32 + 0.5j],
        [5 / 4 + 0.5j, 5 / 6 - 1j / 6, 41 / 96 + 1j / 6, 37 / 32 - 0.5j],
    ]
)


def rotated_a_certificate(m=1):
    return OmegaCertificate(
        n=3,
        delta=0.1**m,
        theta=ROTATED_A_PHASES,
        gamma=np.zeros(3),
        m=m,
        ds_terms=[(1.0, HALF_STOCHASTIC)],
    )
