"""
Configuration Loading for qdesign

Reads config.yml (PyYAML), honours a .env file through python-dotenv and
applies QDESIGN_* environment overrides. Command line flags are applied on
top by src.main.
"""

import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config.yml"


@dataclass
class ToolkitConfig:
    """Tunables of the field builder, verifier, search and CLI"""

    log_level: str = "INFO"
    log_file: Optional[str] = None

    field_max_order: int = 2**26
    zech_exhaustive_limit: int = 2**16
    zech_sample_count: int = 10_000
    poly_check_samples: int = 64
    sample_seed: int = 20240101

    materialize_limit: int = 8191
    subspace_check_limit: int = 200_000
    pair_chunk_blocks: int = 8192

    budget_nodes: int = 100_000_000
    budget_seconds: float = 300.0

    jobs: int = 1
    search_processes: bool = True
    reproducible_output: bool = True
    catalog_dir: Optional[str] = None

    steiner_rows: List[List[int]] = field(default_factory=list)
    fano_q: List[int] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ToolkitConfig":
        """Build from the parsed YAML document; missing keys keep defaults"""
        data = data or {}
        logging_cfg = data.get("logging") or {}
        field_cfg = data.get("field") or {}
        verification_cfg = data.get("verification") or {}
        budget_cfg = (data.get("search") or {}).get("budget") or {}
        tables_cfg = data.get("size_tables") or {}

        defaults = cls()
        return cls(
            log_level=str(logging_cfg.get("level", defaults.log_level)),
            log_file=logging_cfg.get("file"),
            field_max_order=int(field_cfg.get("max_order", defaults.field_max_order)),
            zech_exhaustive_limit=int(
                field_cfg.get("zech_exhaustive_limit", defaults.zech_exhaustive_limit)
            ),
            zech_sample_count=int(
                field_cfg.get("zech_sample_count", defaults.zech_sample_count)
            ),
            poly_check_samples=int(
                field_cfg.get("poly_check_samples", defaults.poly_check_samples)
            ),
            sample_seed=int(field_cfg.get("sample_seed", defaults.sample_seed)),
            materialize_limit=int(
                verification_cfg.get("materialize_limit", defaults.materialize_limit)
            ),
            subspace_check_limit=int(
                verification_cfg.get("subspace_check_limit", defaults.subspace_check_limit)
            ),
            pair_chunk_blocks=int(
                verification_cfg.get("pair_chunk_blocks", defaults.pair_chunk_blocks)
            ),
            budget_nodes=int(budget_cfg.get("nodes", defaults.budget_nodes)),
            budget_seconds=float(budget_cfg.get("seconds", defaults.budget_seconds)),
            jobs=int((data.get("runner") or {}).get("jobs", defaults.jobs)),
            search_processes=bool(
                (data.get("runner") or {}).get("search_processes", defaults.search_processes)
            ),
            reproducible_output=bool(
                (data.get("output") or {}).get("reproducible", defaults.reproducible_output)
            ),
            catalog_dir=(data.get("catalog") or {}).get("dir"),
            steiner_rows=[list(map(int, row)) for row in tables_cfg.get("steiner_rows", [])],
            fano_q=[int(q) for q in tables_cfg.get("fano_q", [])],
        )

    @classmethod
    def from_file(cls, config_path: Optional[str] = None) -> "ToolkitConfig":
        """
        Load configuration from YAML and apply environment overrides.

        Raises FileNotFoundError when an explicitly named file is missing;
        the packaged default file being absent only yields defaults.
        """
        load_dotenv()
        explicit = config_path or os.getenv("QDESIGN_CONFIG")
        path = Path(explicit) if explicit else DEFAULT_CONFIG_PATH

        data: Dict[str, Any] = {}
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
            logger.debug(f"Configuration loaded from {path}")
        except FileNotFoundError:
            if explicit:
                logger.error(f"Configuration file not found at {path}")
                raise
            logger.warning(f"No configuration at {path}, using defaults")
        except yaml.YAMLError as e:
            logger.error(f"Failed to parse configuration {path}: {e}")
            raise

        config = cls.from_dict(data)
        config.apply_environment()
        return config

    def apply_environment(self):
        """Apply QDESIGN_* environment overrides in place"""
        if os.getenv("QDESIGN_LOG_LEVEL"):
            self.log_level = os.getenv("QDESIGN_LOG_LEVEL")
        if os.getenv("QDESIGN_CATALOG_DIR"):
            self.catalog_dir = os.getenv("QDESIGN_CATALOG_DIR")
        if os.getenv("QDESIGN_JOBS"):
            try:
                self.jobs = max(1, int(os.getenv("QDESIGN_JOBS")))
            except ValueError:
                logger.warning(f"Ignoring non-integer QDESIGN_JOBS={os.getenv('QDESIGN_JOBS')!r}")


_active_config: Optional[ToolkitConfig] = None


@lru_cache(maxsize=1)
def _default_config() -> ToolkitConfig:
    return ToolkitConfig.from_file()


def use_config(config: Optional[ToolkitConfig]):
    """Install config process-wide (the CLI does this after applying flags); None restores the default"""
    global _active_config
    _active_config = config


def get_config() -> ToolkitConfig:
    """Process-wide configuration loaded from the default locations"""
    if _active_config is not None:
        return _active_config
    return _default_config()
