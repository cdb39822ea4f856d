from os import cpu_count, getenv
from pathlib import Path
from typing import Mapping, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, PositiveFloat

from meterbench import DEFAULT_CONFIG_PATH
from meterbench.error import ConfigError


class Tolerances(BaseModel):
    """Numerical tolerances, max-abs conventions unless the name says otherwise"""

    model_config = ConfigDict(frozen=True)

    herm: PositiveFloat = 1e-10
    eig: PositiveFloat = 1e-10
    norm: PositiveFloat = 1e-10
    psd: PositiveFloat = 1e-10
    povm: PositiveFloat = 1e-10
    prob: PositiveFloat = 1e-12
    bound: PositiveFloat = 1e-9
    cross: PositiveFloat = 1e-10
    rel_c_a: PositiveFloat = 1e-4


DEFAULT_TOLERANCES = Tolerances()

TOLERANCE_PROFILES: Mapping[str, Tolerances] = {
    "default": DEFAULT_TOLERANCES,
    "strict": Tolerances(
        herm=1e-12,
        eig=1e-12,
        norm=1e-12,
        psd=1e-12,
        povm=1e-12,
        prob=1e-14,
        bound=1e-11,
        cross=1e-12,
        rel_c_a=1e-5,
    ),
}


class Config:
    TOLERANCE_PROFILE: str
    TOLERANCES: Tolerances
    WORKERS: int

    METRICS_PATH: Optional[str]
    LOG_FILE: Optional[str]

    def __init__(self) -> None:
        config_path = Path(DEFAULT_CONFIG_PATH)
        if config_path.is_file():
            load_dotenv(config_path)

        self.TOLERANCE_PROFILE = getenv("METERBENCH_TOLERANCE_PROFILE", "default").lower()
        workers = getenv("METERBENCH_WORKERS") or str(min(32, (cpu_count() or 0) + 4))
        try:
            self.WORKERS = int(workers)
        except ValueError:
            raise ConfigError(f"METERBENCH_WORKERS must be an integer, got '{workers}'") from None

        self.METRICS_PATH = getenv("METERBENCH_METRICS_PATH") or None
        self.LOG_FILE = getenv("METERBENCH_LOG_FILE") or None

        try:
            self.TOLERANCES = TOLERANCE_PROFILES[self.TOLERANCE_PROFILE]
        except KeyError:
            raise ConfigError(
                f"Unknown tolerance profile '{self.TOLERANCE_PROFILE}', "
                f"expected one of {', '.join(TOLERANCE_PROFILES)}"
            ) from None

        if self.WORKERS < 1:
            raise ConfigError("METERBENCH_WORKERS must be a positive integer")
