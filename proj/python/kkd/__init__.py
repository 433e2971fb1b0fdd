from ._kkd import (
    Error,
    Phi,
    eigenvalues,
    eigenvectors,
    entropy_flux,
    genuine_nonlinearity,
    jacobian,
    region_contains,
    riemann_invariants,
    run_scenario,
    simulate,
)

__all__ = [
    "Error",
    "Phi",
    "eigenvalues",
    "eigenvectors",
    "entropy_flux",
    "genuine_nonlinearity",
    "jacobian",
    "region_contains",
    "riemann_invariants",
    "run_scenario",
    "simulate",
]
