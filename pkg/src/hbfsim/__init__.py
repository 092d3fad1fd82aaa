"""Full- vs partial-connection hybrid beamforming toolkit.

Closed-form precoded channel gains, their sinc-based approximations and
operating-region propositions, a one-ring channel + zero-forcing Monte Carlo
simulator, and a CSV-emitting CLI for regenerating the comparison figures.
"""

__version__ = "0.1.0"

from .scenario import (ScenarioConfig, DerivedScenario, validate,
                       angles_from_kappa, centered_reference_angle,
                       scenario_from_kappa, config_digest)
from .channel import (PathSet, ChannelRealization, steering_vector, path_rng,
                      draw_paths, synthesize_exact, synthesize_approx,
                      covariance)
from .precoding import (AnalogPrecoder, DigitalPrecoder, GainReport,
                        RankDeficiencyError, analog_full, analog_partial,
                        effective_channel, zf_precoder, gains_and_rate)
from .closed_form import (dirichlet, eta_f, eta_p, invert_eta_f, g_full,
                          g_partial, ratio_exact, g_full_common_gap,
                          g_partial_common_gap, ratio_exact_common_gap,
                          ratio_approx, full_multiplexing_ratio, a_quantity,
                          omega, proposition1, proposition2, PropositionResult,
                          ClosedFormReport, closed_form_report,
                          UpperBoundReport, sum_rate_upper_bound)
from .monte_carlo import (SimulationPlan, SimulationSummary, BoundAuditReport,
                          run, bound_audit)

__all__ = [
    "__version__",
    "ScenarioConfig", "DerivedScenario", "validate", "angles_from_kappa",
    "centered_reference_angle", "scenario_from_kappa", "config_digest",
    "PathSet", "ChannelRealization", "steering_vector", "path_rng",
    "draw_paths", "synthesize_exact", "synthesize_approx", "covariance",
    "AnalogPrecoder", "DigitalPrecoder", "GainReport", "RankDeficiencyError",
    "analog_full", "analog_partial", "effective_channel", "zf_precoder",
    "gains_and_rate",
    "dirichlet", "eta_f", "eta_p", "invert_eta_f", "g_full", "g_partial",
    "ratio_exact", "g_full_common_gap", "g_partial_common_gap",
    "ratio_exact_common_gap", "ratio_approx", "full_multiplexing_ratio",
    "a_quantity", "omega", "proposition1", "proposition2",
    "PropositionResult", "ClosedFormReport", "closed_form_report",
    "UpperBoundReport", "sum_rate_upper_bound",
    "SimulationPlan", "SimulationSummary", "BoundAuditReport", "run",
    "bound_audit",
]
