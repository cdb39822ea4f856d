"""Meterbench shipped scenario fixtures"""
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
from typing import List

FIXTURE_DIR = Path(__file__).parent
FIXTURE_SUFFIX = ".scenario"


def get_fixture_path(name: str) -> Path:
    """Path of a shipped scenario, with or without its suffix."""
    if not name.endswith(FIXTURE_SUFFIX):
        name += FIXTURE_SUFFIX
    return FIXTURE_DIR / name


def list_fixtures() -> List[str]:
    return sorted(path.stem for path in FIXTURE_DIR.glob("*" + FIXTURE_SUFFIX))
