"""Bose-Hubbard dynamics: exact evolution, mean-field limits and operator identities."""

from .model import InitialState, ModelParams, TimeGrid, TrajectorySeries, build_two_site_params, validate_state

__all__ = ["InitialState", "ModelParams", "TimeGrid", "TrajectorySeries", "build_two_site_params", "validate_state"]
