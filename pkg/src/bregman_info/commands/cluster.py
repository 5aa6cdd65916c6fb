from typing import Callable, List

import typer

from bregman_info.builders import build_generator
from bregman_info.clustering import bregman_lloyd
from bregman_info.commands.options import (
    GeneratorOption,
    GenParamOption,
    InputOption,
    KOption,
    LogBaseOption,
    MaxItersOption,
    OutputOption,
    RestartsOption,
    SeedOption,
    WeightsColumnOption,
)
from bregman_info.constants import EXIT_OK
from bregman_info.core import WeightedDataset
from bregman_info.models.reports import ClusteringReport
from bregman_info.models.run_config import CommandName, RunConfig
from bregman_info import runner
from bregman_info.utils.csv_io import read_weighted_rows


def export_commands() -> List[Callable]:
    return [
        cluster
    ]


def execute(config: RunConfig):
    rows = read_weighted_rows(config.input, config.weights_column)
    gen = build_generator(config.generator, data_dimension=rows.points.shape[1])
    ds = WeightedDataset(weights=rows.weights, points=rows.points, domain=gen.domain)
    state = bregman_lloyd(gen, ds, config.k, seed=config.seed, max_iters=config.max_iters,
                          rel_tol=config.cluster_rel_tol, restarts=config.restarts)
    report = ClusteringReport(generator=gen.name, domain=gen.domain.describe(), k=config.k, seed=config.seed,
                              restarts=config.restarts, state=state)
    return report, EXIT_OK


def cluster(generator: GeneratorOption = None, gen_param: GenParamOption = None, input: InputOption = None,
            weights_column: WeightsColumnOption = None, k: KOption = None, seed: SeedOption = None,
            max_iters: MaxItersOption = None, restarts: RestartsOption = None, output: OutputOption = None,
            log_base: LogBaseOption = 'nat'):
    """
    Hard Bregman clustering of a weighted dataset under the Jensen gap loss.
    """
    raise typer.Exit(runner.run_options(CommandName.CLUSTER, output=output, generator=generator,
                                        gen_param=gen_param, input=input, weights_column=weights_column,
                                        k=k, seed=seed, max_iters=max_iters, restarts=restarts,
                                        log_base=log_base))
