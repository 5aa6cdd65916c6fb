import logging
from pathlib import Path
from typing import List, Optional

from bregman_info import environment
from bregman_info.models.run_config import CommandName, DivergenceSpec, GeneratorSpec, RunConfig, parse_params
from bregman_info.utils.exceptions_handler import handle_exceptions
from bregman_info.utils.report_writer import write_report

logger = logging.getLogger(__name__)


def _or_default(value, default):
    return default() if value is None else value


@handle_exceptions
def run_options(command: CommandName, output: Optional[Path] = None, generator: Optional[str] = None,
                gen_param: Optional[List[str]] = None, divergence: str = 'bregman-of-generator',
                div_param: Optional[List[str]] = None, seed: Optional[int] = None, trials: Optional[int] = None,
                tol: Optional[float] = None, workers: Optional[int] = None, **options) -> int:
    """Resolve command-line options against the environment defaults and run the command."""
    environment.validate_environment_variables()
    options = {key: value for key, value in options.items() if value is not None}
    config = RunConfig(
        command=command,
        output=output,
        generator=GeneratorSpec(name=generator, params=parse_params(gen_param)) if generator else None,
        divergence=DivergenceSpec(name=divergence, params=parse_params(div_param)),
        seed=_or_default(seed, environment.default_seed),
        trials=_or_default(trials, environment.default_trials),
        tol=_or_default(tol, environment.default_tol),
        workers=_or_default(workers, environment.default_workers),
        sampler_radius=environment.default_sampler_radius(),
        **options,
    )
    return run(config)


@handle_exceptions
def run(config: RunConfig) -> int:
    """
    Execute one validated command and write its report.

    Returns:
    --------
    int - 0 on success, 1 when certification refutes, 2 on input errors, 3 on numerical failures
    """
    from bregman_info.commands import executor_for

    logger.info(f"Running {config.command.value}")
    report, exit_code = executor_for(config.command)(config)
    write_report(report, config, config.output)
    return exit_code
