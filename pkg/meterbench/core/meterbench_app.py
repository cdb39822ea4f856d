"""Meterbench base"""
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

import logging
from typing import Optional, Sequence

from meterbench.util.config import Config

from . import metrics
from .command_dispatcher import CommandDispatcher
from .plugin_extender import PluginExtender


class MeterBench(PluginExtender, CommandDispatcher):
    # Initialized during instantiation
    log: logging.Logger
    config: Config

    def __init__(self, config: Config):
        self.config = config
        self.log = logging.getLogger("meterbench")

        # Initialize mixins
        super().__init__()

        self.load_all_plugins()

    @classmethod
    async def init_and_run(cls, config: Config, argv: Optional[Sequence[str]] = None) -> int:
        bench = cls(config)
        return await bench.run(argv)

    async def run(self, argv: Optional[Sequence[str]] = None) -> int:
        args = self.build_parser().parse_args(argv)
        try:
            return await self.invoke(args.command, args)
        finally:
            metrics.export(self.config.METRICS_PATH)
