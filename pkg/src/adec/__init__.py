"""Sigma-delta quantization with adapted decimation for unitarily generated frames."""
from ._core import BACKEND
from .codec import EncodedBlock, decode, encode
from .decimation import (
    BoundReport,
    DecimationOperators,
    adapted,
    alternative,
    bound_report,
    error_bound,
    reconstruct,
    v_dual,
)
from .errors import *  # noqa: F401,F403
from .frames import AnalysisOperator, FrameSpec, build_ugf, frame_factors, harmonic_spec, lower_frame_const
from .harness import ExperimentConfig, ExperimentRecord, fit_decay, run_sweep
from .linalg import herm_eig, pinv
from .operators import DecimationPlan
from .quantizer import Alphabet, QuantizationOutput, sigma_delta, stability_margin
from .verification import verify

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Alphabet",
    "AnalysisOperator",
    "BoundReport",
    "DecimationOperators",
    "DecimationPlan",
    "EncodedBlock",
    "ExperimentConfig",
    "ExperimentRecord",
    "FrameSpec",
    "adapted",
    "alternative",
    "bound_report",
    "build_ugf",
    "decode",
    "encode",
    "error_bound",
    "fit_decay",
    "frame_factors",
    "harmonic_spec",
    "herm_eig",
    "lower_frame_const",
    "pinv",
    "reconstruct",
    "run_sweep",
    "sigma_delta",
    "stability_margin",
    "v_dual",
    "verify",
]
