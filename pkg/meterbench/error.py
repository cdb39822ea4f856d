"""Meterbench Errors Constructor"""
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

import math
from typing import TYPE_CHECKING, Any, Optional, Sequence, Tuple, Type

if TYPE_CHECKING:
    from .command import Command
    from .plugin import Plugin

__all__ = [
    "MeterbenchException",
    "InputError",
    "NumericalError",
    "ConfigError",
    "DimensionMismatch",
    "DimensionTooSmall",
    "IndexOutOfRange",
    "InvalidParameter",
    "InvalidPOVM",
    "InvalidState",
    "NotHermitian",
    "ScenarioParseError",
    "ScenarioValidationError",
    "SweepFormatError",
    "DecompositionFailure",
    "NoSensitivity",
    "SingularOutcome",
    "UndefinedCoherence",
    "ZeroUncertainty",
    "CommandInvokeError",
    "PluginLoadError",
    "ExistingCommandError",
    "ExistingPluginError",
]


class MeterbenchException(Exception):
    """Base exception class for Meterbench"""


class InputError(MeterbenchException):
    """Base class of errors caused by malformed input; the CLI exits with status 2."""


class NumericalError(MeterbenchException):
    """Base class of numerical failures; the CLI exits with status 3."""


class ConfigError(InputError):
    """Exception raised when an environment setting has an unrecognized value"""


class DimensionMismatch(InputError):
    """Exception raised when operands live on Hilbert spaces of different dimension.

    Attributes:
        expected (`int` | `tuple`): The dimension the operation required.
        actual (`int` | `tuple`): The dimension that was supplied.
    """

    def __init__(self, what: str, expected: Any, actual: Any) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch on {what}: expected {expected}, got {actual}")


class DimensionTooSmall(InputError):
    """Exception raised when a discretized meter is requested on too coarse a grid"""

    def __init__(self, dim: int, minimum: int) -> None:
        self.dim = dim
        self.minimum = minimum
        super().__init__(f"Dimension {dim} is too small, at least {minimum} is required")


class IndexOutOfRange(InputError):
    """Exception raised when an eigenindex or outcome label does not exist"""

    def __init__(self, what: str, index: Any, size: int) -> None:
        self.index = index
        self.size = size
        super().__init__(f"{what} '{index}' is out of range for a spectrum of size {size}")


class InvalidParameter(InputError):
    """Exception raised when a scalar parameter is outside its admissible range"""


class InvalidState(InputError):
    """Exception raised when a state vector or density matrix breaks its invariants"""


class NotHermitian(InputError):
    """Exception raised when a matrix fails the Hermitian symmetry check.

    Attributes:
        index (`tuple`): The (i, j) pair with the largest deviation from symmetry.
        deviation (`float`): |m[i, j] - conj(m[j, i])| at that pair.
    """

    def __init__(self, index: Tuple[int, int], deviation: float, tolerance: float) -> None:
        self.index = index
        self.deviation = deviation
        super().__init__(
            f"Matrix is not Hermitian: entry {index} deviates from its conjugate "
            f"transpose by {deviation:.3e} (tolerance {tolerance:.1e})"
        )


class InvalidPOVM(InputError):
    """Exception raised when readout operators are not a valid POVM.

    Attributes:
        deviation (`float`): Max-abs deviation from the violated condition.
    """

    def __init__(self, reason: str, deviation: float) -> None:
        self.reason = reason
        self.deviation = deviation
        super().__init__(f"Invalid POVM, {reason} (max deviation {deviation:.3e})")


class ScenarioParseError(InputError):
    """Exception raised when a scenario or sweep file cannot be read or parsed.

    Attributes:
        path (`str`): The offending file.
        line (`int`, *Optional*): 1-based line number reported by the parser.
    """

    def __init__(self, path: str, reason: str, line: Optional[int] = None) -> None:
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"Failed to parse '{where}': {reason}")


class ScenarioValidationError(InputError):
    """Exception raised when a parsed scenario violates a type invariant.

    Attributes:
        field (`str`): Dotted path of the offending field, e.g. ``system.observable``.
        reason (`str`): The violated invariant.
    """

    def __init__(self, path: str, field: str, reason: str) -> None:
        self.path = path
        self.field = field
        self.reason = reason
        super().__init__(f"Invalid scenario '{path}' at field '{field}': {reason}")

    @classmethod
    def from_locations(
        cls, path: str, errors: Sequence[Tuple[Sequence[Any], str]]
    ) -> "ScenarioValidationError":
        loc, msg = errors[0]
        field = ".".join(str(i) for i in loc) or "<root>"
        extra = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        return cls(path, field, msg + extra)


class SweepFormatError(InputError):
    """Exception raised when a sweep result file is empty or malformed"""


class DecompositionFailure(NumericalError):
    """Exception raised when the Hermitian eigensolver fails or is inaccurate"""


class SingularOutcome(NumericalError):
    """Exception raised when an outcome of vanishing probability has a non-vanishing slope.

    Attributes:
        outcome (`str`): Label of the offending outcome.
        probability (`float`): Its probability.
        derivative (`float`): Its derivative with respect to the meter parameter.
    """

    def __init__(self, outcome: str, probability: float, derivative: float) -> None:
        self.outcome = outcome
        self.probability = probability
        self.derivative = derivative
        super().__init__(
            f"Outcome '{outcome}' has probability {probability:.3e} "
            f"but slope {derivative:.3e}; the Fisher term diverges"
        )


class NoSensitivity(NumericalError):
    """Exception raised when the readout carries no information about the parameter.

    Attributes:
        value (`float`): The distinguished resolution value, always infinity.
    """

    value: float = math.inf

    def __init__(self, fisher: float) -> None:
        self.fisher = fisher
        super().__init__(f"Fisher information {fisher:.3e} vanishes, resolution is infinite")


class UndefinedCoherence(NumericalError):
    """Exception raised when decoherence is requested for a vanishing initial coherence"""

    def __init__(self, a1: int, a2: int, magnitude: float) -> None:
        self.pair = (a1, a2)
        self.magnitude = magnitude
        super().__init__(
            f"Initial coherence between eigenstates {a1} and {a2} is {magnitude:.3e}, "
            "decoherence is undefined"
        )


class ZeroUncertainty(NumericalError):
    """Exception raised when the meter generator has no uncertainty in the initial state.

    Attributes:
        value (`float`): The distinguished decoherence-free distance, always infinity.
    """

    value: float = math.inf

    def __init__(self, delta_b: float) -> None:
        self.delta_b = delta_b
        super().__init__(f"Generator uncertainty {delta_b:.3e} vanishes, distance is infinite")


class CommandInvokeError(MeterbenchException):
    """Exception raised when the command being invoked raised an unexpected exception."""


class PluginLoadError(MeterbenchException):
    """Base exception class for every Plugin errors"""


class ExistingCommandError(PluginLoadError):
    """Exception raised when two plugins register the same subcommand.

    Attributes:
        old_cmd (:obj:`Command`): The command that was registered first.
        new_cmd (:obj:`Command`): The command that tried to replace it.
    """

    def __init__(self, old_cmd: "Command", new_cmd: "Command") -> None:
        old_name = type(old_cmd.plugin).__name__
        new_name = type(new_cmd.plugin).__name__
        self.old_cmd = old_cmd
        self.new_cmd = new_cmd
        super().__init__(
            f"Attempt to replace existing command '{old_cmd.name}' (from {old_name}) "
            f"with '{new_cmd.name}' (from {new_name})"
        )


class ExistingPluginError(PluginLoadError):
    """Exception raised when two plugins share a name"""

    def __init__(self, old_plugin: Type["Plugin"], new_plugin: Type["Plugin"]) -> None:
        self.old_plugin = old_plugin
        self.new_plugin = new_plugin
        super().__init__(f"Plugin '{old_plugin.name}' ({old_plugin.__name__}) already exists")
