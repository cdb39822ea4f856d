"""Meterbench metrics"""
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
from typing import Optional

from prometheus_client import CollectorRegistry, Counter, Gauge, write_to_textfile

log = logging.getLogger(__name__)

REGISTRY = CollectorRegistry()

CommandCount = Counter(
    "meterbench_command_count",
    "Number of commands completed",
    labelnames=["name"],
    registry=REGISTRY,
)
UnhandledError = Counter(
    "meterbench_unhandled_error",
    "Number of unhandled errors",
    labelnames=["type"],
    registry=REGISTRY,
)
AuditCount = Counter(
    "meterbench_audit_count",
    "Number of inequality audits by outcome",
    labelnames=["inequality", "outcome"],
    registry=REGISTRY,
)

CommandLatencySecond = Gauge(
    "meterbench_command_latency",
    "Latency of command processed",
    labelnames=["name"],
    unit="seconds",
    registry=REGISTRY,
)


def export(path: Optional[str]) -> None:
    """Writes the registry in Prometheus text format when a path is configured."""
    if not path:
        return

    try:
        write_to_textfile(path, REGISTRY)
    except OSError as err:
        log.warning("Cannot write metrics to '%s': %s", path, err)
