#!/usr/bin/env python3
"""States, measurements, and sampled outcomes.

A density matrix plays the role a probability vector plays classically,
but outcomes are only reachable through a measurement: a list of PSD
matrices summing to the identity, each paired with an outcome.
"""

import numpy as np

from qelicit import (
    apply_measurement,
    hadamard_pvm,
    random_density,
    sample_outcomes,
    spectral_decompose,
    standard_pvm,
)
from qelicit.cli import example_mixture_state

# A qubit built as a mixture: one third of the |+> state, two thirds of |1>.
rho = example_mixture_state()
print("state:")
print(np.round(rho, 6))

# Measuring in the standard basis reads out the diagonal.
print("\nstandard basis probabilities:", apply_measurement(standard_pvm(2), rho))

# The Hadamard basis sees the off-diagonal coherence as well.
print("hadamard basis probabilities:", apply_measurement(hadamard_pvm(), rho))

# The spectral decomposition is the state's own preferred basis.
dec = spectral_decompose(rho)
print("\neigenvalues:", dec.eigenvalues)
print("top eigenvector:", np.round(dec.eigenvectors[:, 0], 6))

# Sampling simulates repeated measurement of identically prepared copies.
draws = sample_outcomes(standard_pvm(2), rho, 100_000, rng=np.random.default_rng(0))
print("\nempirical frequencies at 1e5 draws:", np.bincount(draws) / 100_000)

# Random mixed states of any rank, for experiments.
print("\na random rank-2 state in dimension 3:")
print(np.round(random_density(3, rank=2, rng=1), 4))
