from typing import Callable, List

import typer

from bregman_info.builders import build_divergence, build_generator
from bregman_info.commands.options import (
    DivergenceOption,
    DivParamOption,
    GeneratorOption,
    GenParamOption,
    InputOption,
    LogBaseOption,
    OutputOption,
    WeightsColumnOption,
)
from bregman_info.constants import EXIT_OK
from bregman_info.core import WeightedDataset, centroid
from bregman_info.information import divergence_information, euclidean_agreement, jensen_gap_information
from bregman_info.models.reports import InformationReport
from bregman_info.models.run_config import CommandName, RunConfig
from bregman_info import runner
from bregman_info.utils.csv_io import read_weighted_rows


def export_commands() -> List[Callable]:
    return [
        info
    ]


def execute(config: RunConfig):
    rows = read_weighted_rows(config.input, config.weights_column)
    gen = build_generator(config.generator, data_dimension=rows.points.shape[1])
    d = build_divergence(config.divergence, gen)
    ds = WeightedDataset(weights=rows.weights, points=rows.points, domain=gen.domain)
    i_phi = jensen_gap_information(gen, ds)
    i_d = divergence_information(d, ds)
    lhs, rhs = euclidean_agreement(ds)
    report = InformationReport(
        generator=gen.name,
        divergence=d.name,
        domain=gen.domain.describe(),
        rows=ds.size,
        dimension=ds.dimension,
        centroid=centroid(ds).point.tolist(),
        I_phi=i_phi,
        I_d=i_d,
        gap=i_phi - i_d,
        euclidean_lhs=lhs,
        euclidean_rhs=rhs,
    )
    return report, EXIT_OK


def info(generator: GeneratorOption = None, gen_param: GenParamOption = None,
         divergence: DivergenceOption = 'bregman-of-generator', div_param: DivParamOption = None,
         input: InputOption = None, weights_column: WeightsColumnOption = None, output: OutputOption = None,
         log_base: LogBaseOption = 'nat'):
    """
    Jensen gap information and divergence information of a weighted dataset.
    """
    raise typer.Exit(runner.run_options(CommandName.INFO, output=output, generator=generator, gen_param=gen_param,
                                        divergence=divergence, div_param=div_param, input=input,
                                        weights_column=weights_column, log_base=log_base))
