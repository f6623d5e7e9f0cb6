"""
Application configuration settings.
"""
from pydantic_settings import BaseSettings
from typing import List


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application Configuration
    app_name: str = "AffineLinkage"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Root system limits
    max_rank: int = 6
    max_weyl_order: int = 100000
    max_oracle_rank: int = 3

    # Search defaults
    default_max_chain_len: int = 6
    default_max_m: int = 4
    allow_empty_chain: bool = False
    step_convention: str = "reflection"

    # Oracle defaults
    default_depth_cap: int = 4
    default_height_cap: int = 6
    l0_convention: str = "aw"
    generic_probe_levels: List[str] = ["7919/13", "-104729/31"]
    oracle_workers: int = 1
    oracle_module_cache_size: int = 32
    verma_action_cache_size: int = 200000

    # HTTP surface
    api_host: str = "0.0.0.0"
    api_port: int = 8000

    class Config:
        env_file = ".env"
        case_sensitive = False


# Global settings instance
settings = Settings()
