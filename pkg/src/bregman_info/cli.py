from dotenv import load_dotenv
load_dotenv()

import logging
import sys

import typer

from bregman_info.commands import attach_commands
from bregman_info.environment import LOG_LEVEL, SUPPORTED_LOG_LEVELS

app = typer.Typer(
    name="bregman-info",
    help="Bregman divergences, Jensen gap and divergence informations, and a sampled information equivalence certifier.",
    no_args_is_help=True,
    add_completion=False,
)

attach_commands(app)


def configure_logging():
    logging.basicConfig(
        stream=sys.stderr,
        level=LOG_LEVEL.upper() if LOG_LEVEL.upper() in SUPPORTED_LOG_LEVELS else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main():
    configure_logging()
    app()


if __name__ == '__main__':
    main()
