"""Synthetic run generators."""

import numpy as np

from logiscale import ComputeLawParams, RunRecord, SeparableLawParams, eval_compute_law, eval_separable

CHINCHILLA = SeparableLawParams(E=1.69, A=406.4, alpha=0.34, B=410.7, beta_data=0.28)


def separable_runs(params, n_records=20, seed=0, sigma=0.0):
    """Runs spanning 3 decades of N (1e7..1e10) and D (1e9..1e12)."""
    rng = np.random.default_rng(seed)
    n = 10.0 ** rng.uniform(7.0, 10.0, n_records)
    d = 10.0 ** rng.uniform(9.0, 12.0, n_records)
    noise = np.exp(rng.normal(0.0, sigma, n_records)) if sigma else np.ones(n_records)
    return [
        RunRecord(n_params=float(a), d_tokens=float(b), loss=eval_separable(params, a, b) * float(z))
        for a, b, z in zip(n, d, noise)
    ]


def compute_runs(params, c_values, sigma=0.0, seed=0):
    rng = np.random.default_rng(seed)
    noise = np.exp(rng.normal(0.0, sigma, len(c_values))) if sigma else np.ones(len(c_values))
    return [
        RunRecord(n_params=1.0, d_tokens=1.0, loss=eval_compute_law(params, c) * float(z), c_logical=float(c))
        for c, z in zip(c_values, noise)
    ]
