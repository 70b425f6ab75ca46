# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import argparse
import unittest

import mock

from hamcrest import (
    assert_that,
    calling,
    contains_exactly,
    equal_to,
    instance_of,
    raises,
)

from ..argparse_cmd import (
    AbstractCommand,
    AbstractSubcommand,
    CommandExecutor,
    Subcommands,
    execute_command,
)


class Greet(AbstractSubcommand):
    name = 'greet'
    help = 'say hello'
    arguments = (
        ('who', {}),
        (('-n', '--times'), {'type': int, 'default': 1}),
    )

    def execute(self, parsed_args):
        return parsed_args.times


class Silent(AbstractSubcommand):
    name = 'silent'

    def execute(self, parsed_args):
        return None


class Tool(AbstractCommand):
    description = 'test tool'
    arguments = (('--verbose', {'action': 'store_true'}),)

    def __init__(self):
        self.hooks = mock.Mock()

    def configure_subcommands(self, subcommands):
        subcommands.add_subcommand(Greet())
        subcommands.add_subcommand(Silent())

    def pre_execute(self, parsed_args):
        self.hooks.pre_execute(parsed_args.verbose)

    def post_execute(self, parsed_args, exit_code):
        self.hooks.post_execute(parsed_args.subcommand, exit_code)


class TestExecuteCommand(unittest.TestCase):
    def test_returns_the_subcommand_exit_code(self):
        tool = Tool()

        exit_code = execute_command(tool, ['--verbose', 'greet', 'world', '--times', '3'])

        assert_that(exit_code, equal_to(3))
        tool.hooks.pre_execute.assert_called_once_with(True)
        tool.hooks.post_execute.assert_called_once_with('greet', 3)

    def test_none_means_success(self):
        assert_that(execute_command(Tool(), ['silent']), equal_to(0))

    def test_sys_argv_by_default(self):
        with mock.patch('sys.argv', ['tool', 'greet', 'you', '-n', '2']):
            assert_that(execute_command(Tool()), equal_to(2))

    def test_a_subcommand_is_required(self):
        with mock.patch('sys.stderr'):
            assert_that(calling(execute_command).with_args(Tool(), []), raises(SystemExit))


class TestCommandExecutor(unittest.TestCase):
    def test_post_execute_runs_when_the_subcommand_raises(self):
        tool = Tool()
        executor = CommandExecutor(tool)

        with mock.patch.object(Greet, 'execute', side_effect=RuntimeError):
            assert_that(calling(executor.execute).with_args(['greet', 'x']), raises(RuntimeError))

        tool.hooks.post_execute.assert_called_once_with('greet', 0)

    def test_build_parser(self):
        parser, table = CommandExecutor(Tool()).build_parser()

        assert_that(parser, instance_of(argparse.ArgumentParser))
        assert_that(parser.description, equal_to('test tool'))
        assert_that([s.name for s in table], contains_exactly('greet', 'silent'))


class TestAbstractCommand(unittest.TestCase):
    def test_subcommands_must_be_configured(self):
        assert_that(
            calling(AbstractCommand().configure_subcommands).with_args(Subcommands()),
            raises(NotImplementedError),
        )


class TestSubcommands(unittest.TestCase):
    def test_duplicate_names_are_rejected(self):
        subcommands = Subcommands()
        subcommands.add_subcommand(Greet())

        assert_that(calling(subcommands.add_subcommand).with_args(Greet()), raises(ValueError))


class TestAbstractSubcommand(unittest.TestCase):
    def test_name_from_the_constructor(self):
        assert_that(Greet('hello').name, equal_to('hello'))

    def test_a_name_is_required(self):
        assert_that(calling(AbstractSubcommand), raises(ValueError))

    def test_execute_must_be_overridden(self):
        assert_that(
            calling(AbstractSubcommand('foo').execute).with_args(mock.Mock()),
            raises(NotImplementedError),
        )
