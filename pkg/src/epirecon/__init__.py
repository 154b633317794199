"""Reconstruction of compartmental epidemic model parameters and initial
conditions from partial output observations."""

from ._kernels import BACKEND
from .calibrate import (CalibrationProblem, CalibrationResult, calibrate,
                        objective, random_start)
from .chains import DerivativeChain, analytic_chain, finite_difference_chain
from .discriminate import (closeness_bound_check, discriminate_approach1,
                           discriminate_approach2, sir_lipschitz_bound)
from .integrate import GridSpec, Trajectory, integrate, integrate_backward
from .models import (Equilibria, ModelDef, PartialCombos,
                     extended_sirs_theta_or_combos, get_model, model_catalog,
                     pull_back_combos, regression_terms, sir_partial_combos)
from .reconstruct import (ReconstructionResult, reconstruct_multitime,
                          reconstruct_wronskian, recover_theta, recover_x0,
                          select_times_multitime, solve_multitime,
                          solve_wronskian, wronskian_sweep)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CalibrationProblem",
    "CalibrationResult",
    "DerivativeChain",
    "Equilibria",
    "GridSpec",
    "ModelDef",
    "PartialCombos",
    "ReconstructionResult",
    "Trajectory",
    "analytic_chain",
    "calibrate",
    "closeness_bound_check",
    "discriminate_approach1",
    "discriminate_approach2",
    "extended_sirs_theta_or_combos",
    "finite_difference_chain",
    "get_model",
    "integrate",
    "integrate_backward",
    "model_catalog",
    "objective",
    "pull_back_combos",
    "random_start",
    "reconstruct_multitime",
    "reconstruct_wronskian",
    "recover_theta",
    "recover_x0",
    "regression_terms",
    "select_times_multitime",
    "sir_lipschitz_bound",
    "sir_partial_combos",
    "solve_multitime",
    "solve_wronskian",
    "wronskian_sweep",
]
