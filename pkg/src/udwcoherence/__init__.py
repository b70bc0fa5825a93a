"""Coherence harvesting from a coherent scalar field by a derivatively coupled
Unruh-DeWitt detector: closed forms, quadrature oracles and a Fock-space oracle.

Units: the detector gap sets the energy scale (Omega = 1); coherence is reported
per unit coupling and energies per unit squared coupling.
"""
from .catalysis import catalysis_energy_cost, catalysis_report, catalytic_coherence
from .harvest import (EvaluationPath, HarvestResult, coherence_static, coherence_upper_bound,
                      commutator_term, energy_cost_coherent, energy_cost_vacuum)
from .model import DetectorConfig, FieldConfig, SwitchingKind, SwitchingProfile
from .motion import coherence_moving, swelling_scan
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "DetectorConfig", "FieldConfig", "SwitchingKind", "SwitchingProfile", "EvaluationPath",
    "HarvestResult", "coherence_static", "energy_cost_coherent", "energy_cost_vacuum",
    "commutator_term", "coherence_upper_bound", "coherence_moving", "swelling_scan",
    "catalytic_coherence", "catalysis_energy_cost", "catalysis_report", "run_verify",
]
