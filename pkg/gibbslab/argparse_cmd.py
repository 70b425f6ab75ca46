# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Small framework for `prog [options] SUBCOMMAND [arguments]` programs.

A Command owns the top-level parser and the hooks that run around every
subcommand. Subcommands declare their name, help and arguments as class
attributes; `arguments` is a sequence of `(flags, options)` pairs handed to
`ArgumentParser.add_argument`.
'''

import argparse
import sys

from .exceptions import EXIT_SUCCESS


def _add_arguments(parser, arguments):
    for flags, options in arguments:
        if isinstance(flags, str):
            flags = (flags,)
        parser.add_argument(*flags, **options)


def execute_command(command, args=None):
    '''Run `command` on args (sys.argv[1:] by default) and return its exit code.'''
    if args is None:
        args = sys.argv[1:]
    return CommandExecutor(command).execute(args)


class CommandExecutor:
    def __init__(self, command):
        self._command = command

    def build_parser(self):
        parser = self._command.create_parser()
        self._command.configure_parser(parser)
        table = self._command.create_subcommands()
        self._command.configure_subcommands(table)
        table.configure_parser(parser)
        return parser, table

    def execute(self, args):
        parser, table = self.build_parser()
        parsed_args = parser.parse_args(args)

        self._command.pre_execute(parsed_args)
        exit_code = EXIT_SUCCESS
        try:
            exit_code = table.execute(parsed_args)
        finally:
            self._command.post_execute(parsed_args, exit_code)
        return EXIT_SUCCESS if exit_code is None else exit_code


class AbstractCommand:
    description = None
    arguments = ()

    def create_parser(self):
        return argparse.ArgumentParser(description=self.description)

    def configure_parser(self, parser):
        _add_arguments(parser, self.arguments)

    def create_subcommands(self):
        return Subcommands()

    def configure_subcommands(self, subcommands):
        raise NotImplementedError('{} declares no subcommand'.format(type(self).__name__))

    def pre_execute(self, parsed_args):
        pass

    def post_execute(self, parsed_args, exit_code):
        pass


class Subcommands:
    '''Subcommands in registration order, at most one per name.'''

    def __init__(self):
        self._by_name = {}

    def __iter__(self):
        return iter(self._by_name.values())

    def add_subcommand(self, subcommand):
        if subcommand.name in self._by_name:
            raise ValueError('duplicate subcommand {!r}'.format(subcommand.name))
        self._by_name[subcommand.name] = subcommand

    def configure_parser(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', metavar='COMMAND')
        subparsers.required = True
        for subcommand in self:
            subparser = subparsers.add_parser(subcommand.name, help=subcommand.help)
            subcommand.configure_parser(subparser)

    def execute(self, parsed_args):
        return self._by_name[parsed_args.subcommand].execute(parsed_args)


class AbstractSubcommand:
    name = None
    help = None
    arguments = ()

    def __init__(self, name=None):
        if name is not None:
            self.name = name
        if not self.name:
            raise ValueError('{} has no name'.format(type(self).__name__))

    def configure_parser(self, parser):
        _add_arguments(parser, self.arguments)

    def execute(self, parsed_args):
        raise NotImplementedError('{} cannot be executed'.format(type(self).__name__))
