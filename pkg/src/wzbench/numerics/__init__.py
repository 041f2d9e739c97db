"""Kernels, the shot-noise model, constant diagrams and generalized convolutions."""

from .benchmarks import ConvolutionSetup, setup
from .constants import all_constants, renorm_constant, renormalization_constants
from .convolution import EdgeKernel, ScalingFit, generalized_convolution, scaling_exponent, test_function
from .kernels import HeatKernel, TruncatedKernel, heat_kernel, homogeneous_kernel, parabolic_norm
from .sampling import HeatProposal, MCEstimate, RadialProposal, run_batches
from .shot_noise import MarkLaw, Profile, ShotNoiseModel, empirical_joint_cumulant

__all__ = [
    "ConvolutionSetup",
    "EdgeKernel",
    "HeatKernel",
    "HeatProposal",
    "MCEstimate",
    "MarkLaw",
    "Profile",
    "RadialProposal",
    "ScalingFit",
    "ShotNoiseModel",
    "TruncatedKernel",
    "all_constants",
    "empirical_joint_cumulant",
    "generalized_convolution",
    "heat_kernel",
    "homogeneous_kernel",
    "parabolic_norm",
    "renorm_constant",
    "renormalization_constants",
    "run_batches",
    "scaling_exponent",
    "setup",
    "test_function",
]
