#!/usr/bin/env python3
"""Entropy as an expected score, divergence as the price of lying.

The self-score of the spectral log score is the negative von Neumann
entropy, and its truth-minus-lie gap is exactly the quantum relative
entropy, mirroring the classical log score / Shannon entropy / KL story.
"""

import numpy as np

from qelicit import (
    expected_score,
    log_spectral,
    matrix_log,
    random_density,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)

rng = np.random.default_rng(3)

# Von Neumann entropy is the Shannon entropy of the spectrum.
p = rng.dirichlet(np.ones(4))
print("Shannon H(p):          ", shannon_entropy(p))
print("von Neumann H(Diag(p)):", von_neumann_entropy(np.diag(p).astype(complex)))

rho = random_density(3, rng=rng)
sigma = random_density(3, rng=rng)
S = log_spectral()

print("\n-S(rho; rho) == H(rho):",
      np.isclose(-expected_score(S, rho, rho), von_neumann_entropy(rho)))

gap = expected_score(S, rho, rho) - expected_score(S, sigma, rho)
print("score gap == D(rho||sigma):", np.isclose(gap, relative_entropy(rho, sigma)))
print("D(rho||sigma) =", relative_entropy(rho, sigma))

# Support matters: claiming impossibility of something possible diverges.
low_rank = random_density(3, rank=2, rng=rng)
print("\nD(rho || rank-2 sigma) =", relative_entropy(rho, low_rank))

# The machinery underneath: the matrix log splits into a finite part on
# the support and a kernel projector carrying the -inf directions.
E = matrix_log(low_rank)
print("log kernel projector trace:", np.trace(E.infinite_part).real)
