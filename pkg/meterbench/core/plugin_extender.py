"""Meterbench plugin extender"""
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

import inspect
from types import ModuleType as PluginType
from typing import TYPE_CHECKING, Any, Iterable, MutableMapping, Optional, Type

from meterbench import plugin, plugins
from meterbench.error import ExistingPluginError

from .mixin_base import MixinBase

if TYPE_CHECKING:
    from .meterbench_app import MeterBench


class PluginExtender(MixinBase):
    # Initialized during instantiation
    plugins: MutableMapping[str, plugin.Plugin]

    def __init__(self: "MeterBench", **kwargs: Any) -> None:
        # Initialize plugin map
        self.plugins = {}

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def load_plugin(
        self: "MeterBench", cls: Type[plugin.Plugin], *, comment: Optional[str] = None
    ) -> None:
        self.log.debug("Loading %s", cls.format_desc(comment))

        if cls.name in self.plugins:
            old = type(self.plugins[cls.name])
            raise ExistingPluginError(old, cls)

        plug = cls(self)
        plug.comment = comment
        self.register_commands(plug)
        self.plugins[cls.name] = plug

    def _load_all_from_metaplug(
        self: "MeterBench", subplugins: Iterable[PluginType], *, comment: Optional[str] = None
    ) -> None:
        for plug in subplugins:
            for sym in dir(plug):
                cls = getattr(plug, sym)
                if (
                    inspect.isclass(cls)
                    and issubclass(cls, plugin.Plugin)
                    and cls is not plugin.Plugin
                    and not cls.disabled
                ):
                    self.load_plugin(cls, comment=comment)

    def load_all_plugins(self: "MeterBench") -> None:
        self._load_all_from_metaplug(plugins.subplugins)
        self.log.debug("Loaded %d plugins with %d commands", len(self.plugins), len(self.commands))

