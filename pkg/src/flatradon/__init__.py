"""Kernel, adjoint descent and injectivity of the maximal flat Radon transform.

Symbolic decisions live in :mod:`flatradon.kernel`; :mod:`flatradon.oracle`
and :mod:`flatradon.funk` are independent numeric cross-checks.
"""
from .kernel import (
    KernelVerdict,
    Verdict,
    annihilates_F,
    descends_to_adjoint,
    enumerate_spherical,
    in_kernel,
    is_spherical,
    is_transform_injective,
    support,
    support_contains,
)
from .lattice import IntegerLattice
from .roots import RootSystem, build_root_system
from .spaces import SpaceSpec, find_space, lattice_Lambda, lattice_LambdaHat, load_catalog, restricted_roots

__version__ = "0.1.0"

__all__ = [
    "IntegerLattice", "KernelVerdict", "RootSystem", "SpaceSpec", "Verdict", "annihilates_F",
    "build_root_system", "descends_to_adjoint", "enumerate_spherical", "find_space", "in_kernel",
    "is_spherical", "is_transform_injective", "lattice_Lambda", "lattice_LambdaHat", "load_catalog",
    "restricted_roots", "support", "support_contains",
]
