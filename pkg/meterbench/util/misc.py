"""Meterbench misc utils"""
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

import re
from typing import Any, Callable, Set, Tuple

from meterbench.error import InvalidParameter

_SEED_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")
_DIMS = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def find_prefixed_funcs(obj: Any, prefix: str) -> Set[Tuple[str, Callable[..., Any]]]:
    """Finds functions with symbol names matching the prefix on the given object."""

    results: Set[Tuple[str, Callable[..., Any]]] = set()

    for sym in dir(obj):
        if sym.startswith(prefix):
            name = sym[len(prefix) :]
            func = getattr(obj, sym)
            if not callable(func):
                continue

            results.add((name, func))

    return results


def parse_seed_range(text: str) -> range:
    """Parses an inclusive ``A..B`` seed range."""
    match = _SEED_RANGE.match(text)
    if not match:
        raise InvalidParameter(f"Seed range must look like 'A..B', got '{text}'")

    start, stop = int(match.group(1)), int(match.group(2))
    if start > stop:
        raise InvalidParameter(f"Seed range '{text}' is empty")
    return range(start, stop + 1)


def parse_dims(text: str) -> Tuple[int, int]:
    """Parses ``NxM`` into (system dimension, meter dimension)."""
    match = _DIMS.match(text)
    if not match:
        raise InvalidParameter(f"Dimensions must look like 'NxM', got '{text}'")
    return int(match.group(1)), int(match.group(2))
