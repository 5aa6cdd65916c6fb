from typing import Callable, List

import typer

from bregman_info.commands.options import InputOption, LogBaseOption, OutputOption, WeightsColumnOption
from bregman_info.constants import EXIT_OK
from bregman_info.core import make_generator_negative_entropy
from bregman_info.information import (
    JointDistribution,
    jensen_gap_information,
    mutual_information_divergence_form,
    mutual_information_entropy_reduction,
)
from bregman_info.models.reports import MutualInformationReport
from bregman_info.models.run_config import CommandName, RunConfig
from bregman_info import runner
from bregman_info.utils.csv_io import read_joint


def export_commands() -> List[Callable]:
    return [
        mi
    ]


def execute(config: RunConfig):
    rows = read_joint(config.input, config.weights_column)
    joint = JointDistribution.from_arrays(rows.weights, rows.points)
    entropy_reduction = mutual_information_entropy_reduction(joint)
    divergence_form = mutual_information_divergence_form(joint)
    columns = joint.conditionals.shape[1]
    jensen_gap = None
    if columns >= 2:
        jensen_gap = jensen_gap_information(make_generator_negative_entropy(columns), joint.to_dataset())
    report = MutualInformationReport(
        rows=joint.conditionals.shape[0],
        columns=columns,
        log_base=config.log_base.value,
        entropy_reduction=entropy_reduction,
        divergence_form=divergence_form,
        gap=entropy_reduction - divergence_form,
        column_marginal=joint.column_marginal().tolist(),
        negentropy_jensen_gap=jensen_gap,
    )
    return report, EXIT_OK


def mi(input: InputOption = None, weights_column: WeightsColumnOption = None, output: OutputOption = None,
       log_base: LogBaseOption = 'nat'):
    """
    Mutual information of a joint distribution given as a weight column (law of A)
    followed by the conditional rows (law of B given A).
    """
    raise typer.Exit(runner.run_options(CommandName.MI, output=output, input=input,
                                        weights_column=weights_column, log_base=log_base))
