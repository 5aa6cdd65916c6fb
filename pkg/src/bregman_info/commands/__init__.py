import typer

from bregman_info.commands import certify, cluster, info, metric_check, mi
from bregman_info.models.run_config import CommandName

COMMAND_MODULES = {
    CommandName.INFO: info,
    CommandName.CERTIFY: certify,
    CommandName.MI: mi,
    CommandName.CLUSTER: cluster,
    CommandName.METRIC_CHECK: metric_check,
}


def executor_for(command: CommandName):
    return COMMAND_MODULES[command].execute


def attach_commands(app: typer.Typer):
    for module in COMMAND_MODULES.values():
        for command_fn in module.export_commands():
            app.command()(command_fn)
