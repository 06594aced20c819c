from .config import ConfigError, ExperimentConfig
from .presets import preset_config, preset_names
from .runner import ComparisonReport, run_experiment
from .verify import verify_suite

__all__ = ["ConfigError", "ExperimentConfig", "ComparisonReport", "preset_config", "preset_names", "run_experiment", "verify_suite"]
