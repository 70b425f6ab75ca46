# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging
import sys

from ..argparse_cmd import AbstractCommand, AbstractSubcommand, execute_command
from ..exceptions import EXIT_SUCCESS, handle_lab_exception
from ..lab_logging import setup_logging
from . import runner

logger = logging.getLogger(__name__)


def overrides_from_args(parsed_args):
    overrides = {}
    if parsed_args.seed is not None:
        overrides['seed'] = parsed_args.seed
    if parsed_args.workers is not None:
        overrides['workers'] = parsed_args.workers
    if parsed_args.out is not None:
        overrides['output'] = {'dir': parsed_args.out}
    return overrides


class LabCommand(AbstractCommand):
    description = 'Numerical experiments on thermal states of quantum spin lattices'
    arguments = (
        ('--debug', {'action': 'store_true', 'help': 'log debug messages'}),
        ('--log-file', {'help': 'also write all log messages to this file'}),
    )

    def configure_subcommands(self, subcommands):
        subcommands.add_subcommand(RunSubcommand())
        subcommands.add_subcommand(ListSubcommand())

    def pre_execute(self, parsed_args):
        setup_logging(parsed_args.log_file, parsed_args.debug)


class RunSubcommand(AbstractSubcommand):
    name = 'run'
    help = 'run the experiment described by a config file'
    arguments = (
        ('config', {'help': 'YAML experiment config'}),
        ('--workers', {'type': int, 'help': 'grid points run concurrently'}),
        ('--out', {'help': 'output directory'}),
        ('--seed', {'type': int, 'help': 'seed overriding the config'}),
    )

    @handle_lab_exception
    def execute(self, parsed_args):
        record = runner.run(parsed_args.config, overrides_from_args(parsed_args))
        for warning in record.warnings:
            logger.warning('%s: %s', record.experiment, warning)
        return EXIT_SUCCESS


class ListSubcommand(AbstractSubcommand):
    name = 'list'
    help = 'list the registered experiments'

    def execute(self, parsed_args):
        for line in runner.create_registry().format_listing():
            print(line)
        return EXIT_SUCCESS


def main(args=None):
    return execute_command(LabCommand(), args)


if __name__ == '__main__':
    sys.exit(main())
