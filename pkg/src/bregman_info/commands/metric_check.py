import logging
from typing import Callable, List

import typer

from bregman_info.builders import build_generator
from bregman_info.commands.options import (
    GeneratorOption,
    GenParamOption,
    InputOption,
    LogBaseOption,
    OutputOption,
    ScaleOption,
)
from bregman_info.constants import EXIT_OK
from bregman_info.core import check_gradient, check_hessian
from bregman_info.divergence import local_metric_check
from bregman_info.errors import StepLeavesDomain
from bregman_info.models.reports import MetricCheckReport
from bregman_info.models.run_config import CommandName, RunConfig
from bregman_info import runner
from bregman_info.utils.csv_io import read_point_and_direction

logger = logging.getLogger(__name__)


def export_commands() -> List[Callable]:
    return [
        metric_check
    ]


def execute(config: RunConfig):
    x, delta = read_point_and_direction(config.input)
    gen = build_generator(config.generator, data_dimension=x.shape[0])
    ratios = local_metric_check(gen, x, delta, config.scales)
    try:
        gradient_error = check_gradient(gen, x)
    except StepLeavesDomain as e:
        logger.warning(f"Gradient check skipped: {e}")
        gradient_error = None
    report = MetricCheckReport(
        generator=gen.name,
        point=x.tolist(),
        direction=delta.tolist(),
        ratios=ratios,
        gradient_error=gradient_error,
        hessian=check_hessian(gen, [x]),
    )
    return report, EXIT_OK


def metric_check(generator: GeneratorOption = None, gen_param: GenParamOption = None, input: InputOption = None,
                 scale: ScaleOption = None, output: OutputOption = None, log_base: LogBaseOption = 'nat'):
    """
    Second-order expansion of the Bregman divergence around a point: the remainder of
    d(x + s delta, x) against 0.5 (s delta)^T H (s delta), relative to ||s delta||^2.
    """
    raise typer.Exit(runner.run_options(CommandName.METRIC_CHECK, output=output, generator=generator,
                                        gen_param=gen_param, input=input, scales=scale or None,
                                        log_base=log_base))
