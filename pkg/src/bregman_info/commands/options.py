from pathlib import Path
from typing import Annotated, List, Optional

import typer

from bregman_info.constants import DEFAULT_RESTARTS, DIVERGENCE_NAMES, GENERATOR_NAMES

GeneratorOption = Annotated[Optional[str], typer.Option(
    "--generator", help=f"Convex generator: {', '.join(GENERATOR_NAMES)}")]
GenParamOption = Annotated[Optional[List[str]], typer.Option(
    "--gen-param", help="Generator parameter key=value (dim, domain, W); repeatable")]
DivergenceOption = Annotated[str, typer.Option(
    "--divergence", help=f"Divergence: {', '.join(DIVERGENCE_NAMES)}")]
DivParamOption = Annotated[Optional[List[str]], typer.Option(
    "--div-param", help="Divergence parameter key=value (scale, eps, W); repeatable")]
InputOption = Annotated[Optional[Path], typer.Option("--input", help="Input CSV file")]
WeightsColumnOption = Annotated[Optional[str], typer.Option(
    "--weights-column", help="Header name or 0-based index of the weight column")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Seed; defaults to BREGMAN_SEED")]
TrialsOption = Annotated[Optional[int], typer.Option("--trials", help="Number of trials; defaults to BREGMAN_TRIALS")]
TolOption = Annotated[Optional[float], typer.Option("--tol", help="Certification tolerance; defaults to BREGMAN_TOL")]
WorkersOption = Annotated[Optional[int], typer.Option(
    "--workers", help="Threads for certification trials; defaults to BREGMAN_WORKERS")]
KOption = Annotated[Optional[int], typer.Option("--k", help="Number of clusters")]
MaxItersOption = Annotated[Optional[int], typer.Option("--max-iters", help="Maximum Lloyd iterations")]
RestartsOption = Annotated[Optional[int], typer.Option(
    "--restarts", help=f"Independent seeded initializations; defaults to {DEFAULT_RESTARTS}")]
ScaleOption = Annotated[Optional[List[float]], typer.Option("--scale", help="Expansion scale s; repeatable")]
OutputOption = Annotated[Optional[Path], typer.Option("--output", help="Report path; stdout when absent")]
LogBaseOption = Annotated[str, typer.Option("--log-base", help="Logarithm base of reported informations (nat)")]
