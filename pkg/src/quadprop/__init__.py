"""Quadratic Schrodinger semigroups on the Bargmann side: complex symplectic
linear algebra, FBI frames, Bergman-form propagator kernels and exact
Gaussian-decay wavefront classification."""

from .catalog import catalog_symbol
from .fbi import (ConjugatedSymbol, FbiPhase, Polarization, Weight,
                  egorov_symbol, fbi_transform_gaussian, kappa_phi,
                  lambda_of_weight, polarize, standard_phase, weight_of_lambda,
                  weight_of_phase)
from .gaussians import GaussianData, HolomorphicGaussian, PolyGaussian
from .propagator import (BergmanKernel, QuadraticPhase, apply_kernel,
                         bergman_kernel, compose_kernels, conjugated_flow,
                         eikonal_phase, evolve_weight, generator_defect,
                         transport_amplitude, weyl_apply)
from .symplectic import (ComplexSymplecticMap, HamiltonMatrix, QuadraticSymbol,
                         RealSubspace, TotallyRealSubspace, build_symbol,
                         hamilton_flow, hamilton_matrix, im_flow,
                         intersect_subspaces, map_subspace, positivity_defect,
                         singular_space, subspace_equal)
from .wavefront import (RealLinearMapOnCn, WavefrontReport, decay_exponent,
                        kappa_flat, predict_wavefront, radical,
                        verify_singular_space_identity, verify_theorem,
                        wavefront_report)

__version__ = "0.1.0"
