"""Readout resolution sweeps"""
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

from typing import ClassVar

from meterbench import command, plugin, report, util


class Resolution(plugin.Plugin):
    name: ClassVar[str] = "Resolution"

    @command.options(command.SCENARIO, command.FORMAT, command.OUT, command.LOG_EPS)
    async def cmd_resolve(self, ctx: command.Context) -> int:
        """Tabulate the Hellinger resolution R(eps) and the sensitivity scalars"""
        loaded = await ctx.load_scenario()
        result = await util.run_sync(
            report.resolution_sweep, loaded, ctx.offsets(loaded), ctx.tolerances
        )
        self.log.info(
            "Scenario '%s': F = %.6g, delta_eps = %.6g",
            result.scenario,
            result.scalars["F"],
            result.scalars["delta_epsilon"],
        )
        ctx.write(result.render(ctx.fmt))
        return command.EXIT_OK
