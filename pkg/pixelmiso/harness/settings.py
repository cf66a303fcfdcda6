import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import toml
from pydantic import BaseSettings, Field, ValidationError, validator

from pixelmiso.exceptions import ConfigurationError
from pixelmiso.harness.models import ZF_ALGORITHMS, Algorithm
from pixelmiso.optim.models import FpConfig, SearchConfig, SeboConfig

logger = logging.getLogger(__name__)


def toml_config_settings_source(settings: BaseSettings) -> Dict[str, Any]:
    path = Path("pyproject.toml")
    if path.is_file():
        return (
            toml.load(path)
            .get("tool", {})
            .get("pixelmiso", {})
            .get("experiment", {})
        )
    return {}


class ExperimentConfig(BaseSettings):
    n: int = Field(2, ge=1)
    u: int = Field(2, ge=1)
    q: int = Field(39, ge=0)
    k: int = Field(72, ge=1)
    snr_db: List[float] = [10.0]
    trials: int = Field(500, ge=1)
    algorithm: Algorithm = Algorithm.FP_ALT
    algorithms: List[Algorithm] = list(Algorithm)
    d: int = Field(6, ge=0)
    a: int = Field(3, ge=2)
    layers: int = Field(6, ge=1)
    seed: int = Field(0, ge=0)
    antenna_path: Optional[Path] = None
    antenna_seed: int = Field(1, ge=0)
    codebook_path: Optional[Path] = None
    rho_bar: float = Field(10.0, gt=0)
    training_size: int = Field(1000, ge=1)
    training_rounds: int = Field(50, ge=1)
    rank_tol: float = Field(1e-6, gt=0, lt=1)
    tol: float = Field(1e-6, ge=0)
    max_iterations: int = Field(200, ge=1)
    search_iterations: int = Field(20, ge=1)
    bisect_tol: float = Field(1e-8, gt=0)
    block_size: int = Field(4, ge=1)
    max_cycles: int = Field(20, ge=1)
    flip_rounds: int = Field(10, ge=0)
    sigma2: float = Field(1.0, gt=0)
    workers: int = Field(1, ge=1)
    record_timing: bool = False

    class Config:
        env_prefix = "pixelmiso_"

        @classmethod
        def customise_sources(
            cls,
            init_settings,
            env_settings,
            file_secret_settings,
        ):
            return (
                init_settings,
                toml_config_settings_source,
                env_settings,
                file_secret_settings,
            )

    @validator("snr_db")
    def check_snr(cls, v):
        if not v:
            raise ValueError("snr_db needs at least one point")
        return v

    @validator("algorithm")
    def check_users(cls, v, values):
        n, u = values.get("n"), values.get("u")
        if n is not None and u is not None and v in ZF_ALGORITHMS and u > n:
            raise ValueError(
                f"{v.value} uses zero-forcing and needs u <= n, "
                f"got u={u}, n={n}"
            )
        return v

    def p_budget(self, snr_db: float) -> float:
        """
        Transmit power for an SNR point, P = 10^(snr/10) * sigma2
        """
        return 10 ** (snr_db / 10) * self.sigma2

    def sebo_config(self, seed: Optional[int] = None) -> SeboConfig:
        return SeboConfig(
            block_size=self.block_size,
            max_cycles=self.max_cycles,
            flip_rounds=self.flip_rounds,
            seed=self.seed if seed is None else seed,
        )

    def fp_config(self, seed: Optional[int] = None) -> FpConfig:
        return FpConfig(
            max_iterations=self.max_iterations,
            tol=self.tol,
            bisect_tol=self.bisect_tol,
            sebo=self.sebo_config(seed),
        )

    def search_config(self, seed: Optional[int] = None) -> SearchConfig:
        return SearchConfig(
            max_iterations=self.search_iterations,
            tol=self.tol,
            seed=self.seed if seed is None else seed,
        )


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a flat TOML file of `key = value` lines

    :param path: Path
    :return: Dict[str, Any]
    """
    try:
        return dict(toml.load(path))
    except (OSError, toml.TomlDecodeError) as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}")


def load_config(
    path: Optional[Path] = None, **overrides: Any
) -> ExperimentConfig:
    """
    Build the experiment configuration. Explicit overrides win over the
    config file, which wins over pyproject.toml and the environment.

    :param path: Optional[Path] - TOML config file
    :param overrides: values from the command line, None values ignored
    :return: ExperimentConfig
    """
    kwargs = read_config_file(path) if path is not None else {}
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    try:
        config = ExperimentConfig(**kwargs)
    except ValidationError as e:
        raise ConfigurationError(str(e))
    logger.debug(f"Experiment configuration: {config}")
    return config
