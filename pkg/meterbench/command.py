"""Meterbench base command"""
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
import json
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, Callable, Coroutine, Dict, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import final

from meterbench import __version__, util
from meterbench.quantum import LoadedScenario, load_scenario
from meterbench.util.config import Tolerances

if TYPE_CHECKING:
    from meterbench.core import MeterBench

CommandFunc = Callable[..., Coroutine[Any, Any, int]]
Decorator = Callable[[CommandFunc], CommandFunc]
Argument = Tuple[Tuple[str, ...], Dict[str, Any]]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def arg(*flags: str, **kwargs: Any) -> Argument:
    """Describes one argparse argument of a command."""
    return flags, kwargs


SCENARIO = arg("scenario", help="scenario file (YAML)")
FORMAT = arg("--format", choices=("csv", "json"), default="csv", help="output format")
OUT = arg("--out", metavar="PATH", default=None, help="write to PATH instead of stdout")
LOG_EPS = arg("--log-eps", action="store_true", help="use a log-spaced eps grid")


def options(*arguments: Argument) -> Decorator:
    """Sets the command line arguments of a command function."""

    def options_decorator(func: CommandFunc) -> CommandFunc:
        setattr(func, "_cmd_arguments", arguments)
        return func

    return options_decorator


class Command:
    name: str
    plugin: Any
    func: CommandFunc
    arguments: Sequence[Argument]

    def __init__(
        self, name: str, plugin: Any, func: CommandFunc, arguments: Sequence[Argument]
    ) -> None:
        self.name = name
        self.plugin = plugin
        self.func = func
        self.arguments = arguments

    @property
    def help(self) -> str:
        doc = self.func.__doc__ or ""
        return doc.strip().splitlines()[0] if doc.strip() else ""

    def add_parser(self, subparsers: Any) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(command=self.name)
        return parser

    def __repr__(self) -> str:
        return f"<command '{self.name}' from '{self.plugin.name}'>"


class Context:
    bench: "MeterBench"
    cmd: Command
    args: argparse.Namespace
    log: logging.Logger

    def __init__(self, bench: "MeterBench", cmd: Command, args: argparse.Namespace) -> None:
        self.bench = bench
        self.cmd = cmd
        self.args = args
        self.log = cmd.plugin.log

    @property
    def tolerances(self) -> Tolerances:
        return self.bench.config.TOLERANCES

    @property
    def fmt(self) -> str:
        return getattr(self.args, "format", "csv")

    @final
    async def load_scenario(self) -> LoadedScenario:
        """Loads the scenario named on the command line off the event loop."""
        return await util.run_sync(load_scenario, self.args.scenario, self.tolerances)

    def offsets(self, loaded: LoadedScenario) -> np.ndarray:
        return loaded.sweep.offsets(True if getattr(self.args, "log_eps", False) else None)

    @final
    def write(self, text: str) -> None:
        """Writes a data file to ``--out`` (plus its metadata sidecar) or to stdout."""
        out: Optional[str] = getattr(self.args, "out", None)
        if out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        with open(out, "w", encoding="utf-8", newline="\n") as file:
            file.write(text)
        self.write_meta(Path(out))

    @final
    def write_meta(self, out: Path) -> None:
        meta = {
            "version": __version__,
            "command": self.cmd.name,
            "tolerance_profile": self.bench.config.TOLERANCE_PROFILE,
            "created": util.time.utc_timestamp(),
        }
        sidecar = out.with_name(out.name + ".meta.json")
        sidecar.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        self.log.debug("Wrote metadata sidecar %s", sidecar)
