import os

from bregman_info.errors import ConfigurationError

LOG_LEVEL = os.getenv("BREGMAN_LOG_LEVEL", "WARNING")
DEFAULT_SEED = os.getenv("BREGMAN_SEED", "0")
DEFAULT_TRIALS = os.getenv("BREGMAN_TRIALS", "1000")
DEFAULT_TOL = os.getenv("BREGMAN_TOL", "1e-8")
WORKERS = os.getenv("BREGMAN_WORKERS", "1")
SAMPLER_RADIUS = os.getenv("BREGMAN_SAMPLER_RADIUS", "3.0")

SUPPORTED_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _parse(name: str, raw: str, cast):
    try:
        return cast(raw)
    except ValueError:
        raise ConfigurationError(f"{name} env variable has invalid value {raw!r}.")


def validate_environment_variables():
    if LOG_LEVEL.upper() not in SUPPORTED_LOG_LEVELS:
        raise ConfigurationError(f"BREGMAN_LOG_LEVEL {LOG_LEVEL} not supported.")

    if _parse("BREGMAN_SEED", DEFAULT_SEED, int) < 0:
        raise ConfigurationError("BREGMAN_SEED env variable must be nonnegative.")

    if _parse("BREGMAN_TRIALS", DEFAULT_TRIALS, int) < 1:
        raise ConfigurationError("BREGMAN_TRIALS env variable must be positive.")

    if _parse("BREGMAN_TOL", DEFAULT_TOL, float) <= 0:
        raise ConfigurationError("BREGMAN_TOL env variable must be positive.")

    if _parse("BREGMAN_WORKERS", WORKERS, int) < 1:
        raise ConfigurationError("BREGMAN_WORKERS env variable must be positive.")

    if _parse("BREGMAN_SAMPLER_RADIUS", SAMPLER_RADIUS, float) <= 0:
        raise ConfigurationError("BREGMAN_SAMPLER_RADIUS env variable must be positive.")


def default_seed() -> int:
    return int(DEFAULT_SEED)


def default_trials() -> int:
    return int(DEFAULT_TRIALS)


def default_tol() -> float:
    return float(DEFAULT_TOL)


def default_workers() -> int:
    return int(WORKERS)


def default_sampler_radius() -> float:
    return float(SAMPLER_RADIUS)
