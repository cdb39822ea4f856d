"""Bound audits over scenario files and random ensembles"""
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

from typing import ClassVar, List

from meterbench import command, plugin, report, util
from meterbench.core.metrics import AuditCount
from meterbench.error import InvalidParameter
from meterbench.quantum import make_random_scenario
from meterbench.util.config import Tolerances
from meterbench.util.table import AuditRecord, render_audits


def _audit_random(seed: int, dims: str, tol: Tolerances) -> AuditRecord:
    dim_system, dim_meter = util.misc.parse_dims(dims)
    sc, povm = make_random_scenario(seed, dim_system, dim_meter)
    return report.audit_scenario(sc, povm, 0.0, report.RANDOM_AUDIT_OFFSETS, tol)


def _count(record: AuditRecord) -> None:
    AuditCount.labels("qcrb", "pass" if record.qcrb_satisfied else "fail").inc()
    AuditCount.labels("d_geq_r", "pass" if record.d_geq_r_satisfied else "fail").inc()
    if record.vacuous:
        AuditCount.labels("resolution", "vacuous").inc()
    else:
        outcome = "pass" if record.resolution_bound_satisfied else "fail"
        AuditCount.labels("resolution", outcome).inc()


class Bounds(plugin.Plugin):
    name: ClassVar[str] = "Bounds"

    @command.options(
        command.arg("scenario", nargs="?", default=None, help="scenario file (YAML)"),
        command.arg("--random", metavar="A..B", default=None, help="audit random seeds A..B"),
        command.arg("--dims", metavar="NxM", default="3x4", help="random system x meter dims"),
        command.FORMAT,
        command.OUT,
        command.LOG_EPS,
    )
    async def cmd_bounds(self, ctx: command.Context) -> int:
        """Audit F <= 4 dB^2/hbar^2, D >= R and delta_A >= C_A; exit 1 on any violation

        A scenario file is audited on its own sweep grid. Random scenarios
        are audited at phi_B = 0 on a fixed grid over [0, 10] and fan out over
        the configured worker pool.
        """
        args = ctx.args
        if args.scenario is None and args.random is None:
            raise InvalidParameter("bounds needs a scenario file or --random A..B")

        records: List[AuditRecord] = []
        if args.scenario is not None:
            loaded = await ctx.load_scenario()
            records.append(
                await util.run_sync(
                    report.audit_scenario,
                    loaded.scenario,
                    loaded.povm,
                    loaded.sweep.phi_B,
                    ctx.offsets(loaded),
                    ctx.tolerances,
                )
            )

        if args.random is not None:
            seeds = util.misc.parse_seed_range(args.random)
            util.misc.parse_dims(args.dims)
            records.extend(
                await util.async_helper.map_sync(
                    lambda seed: _audit_random(seed, args.dims, ctx.tolerances),
                    seeds,
                    workers=ctx.bench.config.WORKERS,
                )
            )

        for record in records:
            _count(record)
            if not record.passed:
                self.log.warning("Scenario '%s' violates an audited bound", record.scenario)

        passed = sum(record.passed for record in records)
        self.log.info("%d/%d scenarios pass", passed, len(records))
        ctx.write(render_audits(records, ctx.fmt))
        return command.EXIT_OK if passed == len(records) else command.EXIT_VIOLATION
