from typing import Callable, List

import typer

from bregman_info.builders import build_divergence, build_generator
from bregman_info.certifier import TrialSampler, certify as certify_equivalence
from bregman_info.commands.options import (
    DivergenceOption,
    DivParamOption,
    GeneratorOption,
    GenParamOption,
    LogBaseOption,
    OutputOption,
    SeedOption,
    TolOption,
    TrialsOption,
    WorkersOption,
)
from bregman_info.constants import EXIT_OK, EXIT_REFUTED
from bregman_info.models.certification import Verdict
from bregman_info.models.run_config import CommandName, RunConfig
from bregman_info import runner


def export_commands() -> List[Callable]:
    return [
        certify
    ]


def execute(config: RunConfig):
    gen = build_generator(config.generator)
    d = build_divergence(config.divergence, gen)
    sampler = TrialSampler(seed=config.seed, domain=gen.domain, trials=config.trials, radius=config.sampler_radius)
    report = certify_equivalence(gen, d, sampler, tol=config.tol, workers=config.workers)
    exit_code = EXIT_REFUTED if report.verdict == Verdict.REFUTED_WITH_COUNTEREXAMPLE else EXIT_OK
    return report, exit_code


def certify(generator: GeneratorOption = None, gen_param: GenParamOption = None,
            divergence: DivergenceOption = 'bregman-of-generator', div_param: DivParamOption = None,
            seed: SeedOption = None, trials: TrialsOption = None, tol: TolOption = None,
            workers: WorkersOption = None, output: OutputOption = None, log_base: LogBaseOption = 'nat'):
    """
    Sample weighted datasets and test whether the divergence is the Bregman divergence of the generator.
    Exits with 1 and writes a counterexample when the information equivalence fails.
    """
    raise typer.Exit(runner.run_options(CommandName.CERTIFY, output=output, generator=generator,
                                        gen_param=gen_param, divergence=divergence, div_param=div_param,
                                        seed=seed, trials=trials, tol=tol, workers=workers,
                                        log_base=log_base))
