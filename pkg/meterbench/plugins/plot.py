"""Line charts of sweep results"""
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

from pathlib import Path
from typing import ClassVar, Dict, Tuple, Union

import matplotlib
from matplotlib.figure import Figure

from meterbench import command, plugin, util
from meterbench.error import SweepFormatError
from meterbench.util.table import SweepResult, read_sweep

# label, line style
CURVE_STYLES: Dict[str, Tuple[str, str]] = {
    "R": ("R(eps)  resolution", "-"),
    "D": ("D(eps)  decoherence", "-"),
    "R_qubit_oracle": ("R qubit closed form", "--"),
    "D_qubit_oracle": ("D qubit closed form", ":"),
}


def render_svg(result: SweepResult, out: Union[str, Path]) -> None:
    """Writes R and D (and any oracle columns) against eps as a deterministic SVG."""
    curves = {name: values for name, values in result.curves.items() if name in CURVE_STYLES}
    if not curves:
        raise SweepFormatError(f"Sweep '{result.scenario}' has no R or D column to plot")
    if not result.offsets.size:
        raise SweepFormatError(f"Sweep '{result.scenario}' has no rows")

    with matplotlib.rc_context({"svg.hashsalt": "meterbench", "svg.fonttype": "path"}):
        fig = Figure(figsize=(6.4, 4.0))
        ax = fig.add_subplot()
        for name, values in curves.items():
            label, style = CURVE_STYLES[name]
            ax.plot(result.offsets, values, style, label=label, linewidth=1.4)

        ax.set_xlabel("parameter difference eps")
        ax.set_ylabel("R(eps), D(eps)")
        ax.set_title(result.scenario)
        ax.set_ylim(-0.02, 1.02)
        ax.grid(True, linewidth=0.4, alpha=0.5)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(out, format="svg", metadata={"Date": None})


class Plot(plugin.Plugin):
    name: ClassVar[str] = "Plot"

    @command.options(
        command.arg("sweep", help="sweep result file (CSV or JSON)"),
        command.arg("--out", metavar="PATH", default=None, help="SVG path, default <sweep>.svg"),
    )
    async def cmd_plot(self, ctx: command.Context) -> int:
        """Plot R(eps) and D(eps) from a sweep file as an SVG line chart"""
        result = await util.run_sync(read_sweep, ctx.args.sweep)
        out = Path(ctx.args.out or Path(ctx.args.sweep).with_suffix(".svg"))
        await util.run_sync(render_svg, result, out)
        self.log.info("Wrote %s", out)
        if ctx.args.out is not None:
            ctx.write_meta(out)
        return command.EXIT_OK
