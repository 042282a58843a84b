"""Pencil (long-resolvent) representations of homogeneous positive functions on
products of matrix halfplanes, their double Cayley transforms, unitary
colligations and real structure."""

__version__ = "0.1.0"

from .cayley import double_cayley, inverse_double_cayley
from .colligation import (Colligation, KernelSamples, bess_from_colligation,
                          check_spectrum_condition, kernel_samples_from_pencil, lurking_isometry,
                          pick_samples, theta_from_pencil, transfer_eval, transfer_eval_operator,
                          verify_agler_identity)
from .domain import MatrixPoint, OperatorTuple, Shape
from .membership import SampleConfig, check_membership
from .pencil import (BessFunction, Evaluator, PsdPencil, eval_f, eval_f_operator, phi,
                     reconstruct_from_phi)
from .report import Report

__all__ = [
    "BessFunction", "Colligation", "Evaluator", "KernelSamples", "MatrixPoint", "OperatorTuple",
    "PsdPencil", "Report", "SampleConfig", "Shape", "bess_from_colligation",
    "check_membership", "check_spectrum_condition", "double_cayley", "eval_f",
    "eval_f_operator", "inverse_double_cayley", "kernel_samples_from_pencil",
    "lurking_isometry", "phi", "pick_samples", "reconstruct_from_phi", "theta_from_pencil",
    "transfer_eval", "transfer_eval_operator", "verify_agler_identity",
]
