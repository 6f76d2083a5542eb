"""Numerical laboratory for sampling and interpolation density in
reproducing kernel Hilbert spaces.

The package splits into a geometry layer (spaces, point sets), a kernel
layer (reproducing kernels and their hypothesis checks), a spectral layer
(Gram matrices, localization operators, finite frame sections, dual
systems), and a verdict layer that compares empirical point densities
against averaged kernel traces. The pipeline module ties the layers into
reproducible experiment runs.
"""

from .version import VERSION as __version__

from .errors import (CensoredDataError, DegenerateKernelError,
                     DegenerateWindowError, InputError, MatrixCapError,
                     SeparationError, SingularGramError)
from .spaces import (EuclideanLebesgue, FockGaussian,
                     HyperbolicUpperHalfPlane, IntegerWordMetric,
                     LogMetricLine, PhasePlane, QuadratureRule, Space,
                     check_locally_doubling, check_ndb, check_wad,
                     metric_ball_lattice)
from .pointsets import (DensityReport, PointSet, beurling_density,
                        candidate_centers, count_in_ball, load_pointset,
                        make_pointset, relative_separation, save_pointset,
                        shell_count_bound)
from .kernels import (FockGaussianNormalized, GaborGaussian, Kernel,
                      PaleyWienerBox, SyntheticPolyDecay, check_HAP,
                      check_WL, check_axiom_D, check_poly_decay_hypothesis,
                      witness_diagonal_bound)
from .spectral import (DualFrameModel, FrameSectionReport, LocalizationModel,
                       SpectralReport, TraceReport, averaged_trace,
                       ball_trace_integral, dimension_free_ratio,
                       dual_identities_check, dual_system, eigh_checked,
                       eigvalsh, frame_bounds_finite_section, frame_curve,
                       gram, localization_operator, localization_spectrum,
                       riesz_bounds, riesz_curve, spectral_report)
from .verdict import (AxiomAudit, AxiomVerdict, InequalityCheck, Thresholds,
                      VerdictReport, assemble_verdict, classify_empirically,
                      density_vs_trace, dimension_free_ratios,
                      hypothesis_audit)
from .config import ExperimentConfig, build_kernel, build_space, \
    canonical_json, load_config
from .generators import generate_pointset
from .registry import canonical_config, canonical_names
from .pipeline import RunResult, run, run_canonical

__all__ = [
    "__version__",
    # errors
    "InputError", "CensoredDataError", "MatrixCapError",
    "DegenerateKernelError", "DegenerateWindowError", "SingularGramError",
    "SeparationError",
    # geometry
    "Space", "EuclideanLebesgue", "LogMetricLine",
    "HyperbolicUpperHalfPlane", "IntegerWordMetric", "FockGaussian",
    "PhasePlane", "QuadratureRule", "metric_ball_lattice", "check_ndb",
    "check_wad", "check_locally_doubling",
    # point sets
    "PointSet", "make_pointset", "load_pointset", "save_pointset",
    "count_in_ball", "beurling_density", "DensityReport",
    "relative_separation", "shell_count_bound", "candidate_centers",
    # kernels
    "Kernel", "PaleyWienerBox", "FockGaussianNormalized", "GaborGaussian",
    "SyntheticPolyDecay", "check_axiom_D", "witness_diagonal_bound",
    "check_WL", "check_HAP", "check_poly_decay_hypothesis",
    # spectral
    "gram", "eigh_checked", "eigvalsh", "spectral_report", "SpectralReport",
    "riesz_bounds", "riesz_curve", "localization_operator",
    "localization_spectrum", "LocalizationModel", "averaged_trace",
    "ball_trace_integral", "TraceReport", "frame_bounds_finite_section",
    "frame_curve", "FrameSectionReport", "dual_system", "DualFrameModel",
    "dual_identities_check", "dimension_free_ratio",
    # verdict
    "Thresholds", "AxiomVerdict", "AxiomAudit", "hypothesis_audit",
    "classify_empirically", "InequalityCheck", "VerdictReport",
    "assemble_verdict", "dimension_free_ratios", "density_vs_trace",
    # harness
    "ExperimentConfig", "load_config", "canonical_json", "build_space",
    "build_kernel", "generate_pointset", "canonical_config",
    "canonical_names", "run", "run_canonical", "RunResult",
]
