"""Meterbench command dispatcher"""
# Copyright (C) 2026  meterbench contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import argparse
from typing import TYPE_CHECKING, Any, MutableMapping, Sequence

from meterbench import __version__, command, plugin, util
from meterbench.error import (
    CommandInvokeError,
    ExistingCommandError,
    InputError,
    NumericalError,
)

from .metrics import CommandCount, CommandLatencySecond, UnhandledError
from .mixin_base import MixinBase

if TYPE_CHECKING:
    from .meterbench_app import MeterBench


class CommandDispatcher(MixinBase):
    # Initialized during instantiation
    commands: MutableMapping[str, command.Command]

    def __init__(self: "MeterBench", **kwargs: Any) -> None:
        # Initialize command map
        self.commands = {}

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def register_command(
        self: "MeterBench",
        plug: plugin.Plugin,
        name: str,
        func: command.CommandFunc,
        *,
        arguments: Sequence[command.Argument] = (),
    ) -> None:
        cmd = command.Command(name, plug, func, arguments)

        if name in self.commands:
            orig = self.commands[name]
            raise ExistingCommandError(orig, cmd)

        self.commands[name] = cmd

    def unregister_command(self: "MeterBench", cmd: command.Command) -> None:
        del self.commands[cmd.name]

    def register_commands(self: "MeterBench", plug: plugin.Plugin) -> None:
        for name, func in sorted(util.misc.find_prefixed_funcs(plug, "cmd_")):
            done = False

            try:
                self.register_command(
                    plug, name, func, arguments=getattr(func, "_cmd_arguments", ())
                )
                done = True
            finally:
                if not done:
                    self.unregister_commands(plug)

    def unregister_commands(self: "MeterBench", plug: plugin.Plugin) -> None:
        # Can't unregister while iterating, so collect commands to unregister afterwards
        to_unreg = [cmd for cmd in self.commands.values() if cmd.plugin == plug]
        for cmd in to_unreg:
            self.unregister_command(cmd)

    def build_parser(self: "MeterBench") -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="meterbench",
            description="Simulate system-meter measurements and audit the "
            "resolution/decoherence trade-off.",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
        for name in sorted(self.commands):
            self.commands[name].add_parser(subparsers)
        return parser

    async def invoke(self: "MeterBench", name: str, args: argparse.Namespace) -> int:
        """Runs a command and maps its failure to the process exit status."""
        cmd = self.commands[name]
        ctx = command.Context(self, cmd, args)
        start = util.time.usec()

        with CommandLatencySecond.labels(cmd.name).time():
            try:
                ret = await cmd.func(ctx)
                CommandCount.labels(cmd.name).inc()
            except InputError as e:
                cmd.plugin.log.error("%s", e)
                ret = command.EXIT_INPUT
            except NumericalError as e:
                cmd.plugin.log.error("Numerical failure: %s", e)
                ret = command.EXIT_NUMERICAL
            except Exception as e:  # skipcq: PYL-W0703
                UnhandledError.labels(type(e).__name__).inc()
                constructor_invoke = CommandInvokeError(
                    f"raised from {type(e).__name__}: {str(e)}"
                ).with_traceback(e.__traceback__)
                cmd.plugin.log.error(
                    "Error in command '%s'\n  Data:\n    • Arguments -> %s\n",
                    cmd.name,
                    vars(args),
                    exc_info=constructor_invoke,
                )
                ret = command.EXIT_NUMERICAL

        self.log.debug(
            "Command '%s' exited with %d after %s",
            cmd.name,
            ret,
            util.time.format_duration_us(util.time.usec() - start),
        )
        return ret
