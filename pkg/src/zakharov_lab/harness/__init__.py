from .config import RunConfig, load_config, parse_config, validate_config
from .experiments import ExperimentResult, run_experiment
from .runner import execute

__all__ = [
    "ExperimentResult",
    "RunConfig",
    "execute",
    "load_config",
    "parse_config",
    "run_experiment",
    "validate_config",
]
