"""
Configuration management for SlideBench
Supports multiple environments (development, testing, production) and the
YAML parameter file that drives every metric.
"""
import logging
import os

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from models.Settings import BUILTIN_PROFILES, EvaluationConfig, LlmSettings, ReportingProfile
from utils.Exceptions import ConfigError

load_dotenv()

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
PROMPTS_FOLDER = os.path.join(BASE_DIR, 'resources', 'prompts')
VERSION = "1.0.0"

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class Config:
    """Base configuration"""

    DEBUG = False
    TESTING = False

    # Parameter file and reporting profile
    EVALUATION_CONFIG_PATH = os.getenv('SLIDEBENCH_CONFIG')
    REPORTING_PROFILE = os.getenv('SLIDEBENCH_PROFILE')
    WORKERS = int(os.getenv('SLIDEBENCH_WORKERS', 4))
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # LLM endpoint
    LLM_API_URL = os.getenv('LLM_API_URL')
    LLM_API_KEY = os.getenv('LLM_API_KEY')
    LLM_MODEL = os.getenv('LLM_MODEL')
    LLM_TIMEOUT = os.getenv('LLM_TIMEOUT')
    LLM_MAX_RETRIES = os.getenv('LLM_MAX_RETRIES')

    # CORS
    CORS_ORIGINS = os.getenv('CORS_ORIGINS', '*').split(',')

    # Upload settings
    MAX_CONTENT_LENGTH = int(os.getenv('MAX_CONTENT_LENGTH', 200 * 1024 * 1024))


class DevelopmentConfig(Config):
    """Development environment configuration"""
    DEBUG = True
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """Testing environment configuration"""
    TESTING = True
    WORKERS = 1
    LLM_API_URL = "http://llm.invalid/v1/chat/completions"
    LLM_API_KEY = "test-key"
    LLM_MAX_RETRIES = "0"


class ProductionConfig(Config):
    """Production environment configuration"""
    DEBUG = False
    CORS_ORIGINS = os.getenv('CORS_ORIGINS', 'https://yourdomain.com').split(',')


def get_config(config_name=None):
    """
    Get configuration object based on environment

    Args:
        config_name: 'development', 'testing', 'production' or None to use SLIDEBENCH_ENV

    Returns:
        Config class instance
    """
    if config_name is None:
        config_name = os.getenv('SLIDEBENCH_ENV', 'development').lower()

    config_map = {
        'development': DevelopmentConfig,
        'testing': TestingConfig,
        'production': ProductionConfig,
        'dev': DevelopmentConfig,
        'test': TestingConfig,
        'prod': ProductionConfig,
    }

    config_class = config_map.get(config_name, DevelopmentConfig)
    return config_class()


def configure_logging(level=None):
    """Install the single stream handler used by the CLI and the app."""
    level = (level or os.getenv('LOG_LEVEL', 'INFO')).upper()
    root = logging.getLogger()
    if not any(getattr(h, "_slidebench", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._slidebench = True
        root.addHandler(handler)
    root.setLevel(level)


def _llm_from_env(env_config, file_values):
    values = dict(file_values or {})
    env_map = {
        "api_url": env_config.LLM_API_URL,
        "api_key": env_config.LLM_API_KEY,
        "model": env_config.LLM_MODEL,
        "timeout": env_config.LLM_TIMEOUT,
        "max_retries": env_config.LLM_MAX_RETRIES,
    }
    for key, value in env_map.items():
        if value not in (None, ""):
            values[key] = value
    return LlmSettings(**values)


def _select_profile(requested, file_value, profiles):
    if isinstance(file_value, dict):
        candidate = ReportingProfile(**file_value)
        profiles = {**profiles, candidate.name: candidate}
        file_value = candidate.name
    name = requested or file_value or "standard"
    if name not in profiles:
        raise ConfigError(
            f"unknown reporting profile '{name}' (available: {', '.join(sorted(profiles))})",
            keys=["profile"],
        )
    return profiles[name]


def load_evaluation_config(path=None, profile=None, env_config=None):
    """
    Build the EvaluationConfig from an optional YAML file plus the environment.

    Args:
        path: YAML parameter file; falls back to SLIDEBENCH_CONFIG
        profile: reporting profile name; overrides the file and SLIDEBENCH_PROFILE
        env_config: Config instance, defaults to get_config()

    Returns:
        EvaluationConfig
    """
    env_config = env_config or get_config()
    path = path or env_config.EVALUATION_CONFIG_PATH
    data = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as e:
            raise ConfigError(f"cannot read config file '{path}': {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"config file '{path}' is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config file '{path}' must hold a mapping at top level")

    data = dict(data)
    try:
        profiles = dict(BUILTIN_PROFILES)
        for name, block in (data.pop("profiles", None) or {}).items():
            profiles[name] = ReportingProfile(name=name, **(block or {}))
        data["profile"] = _select_profile(
            profile or env_config.REPORTING_PROFILE, data.get("profile"), profiles
        )
        data["llm"] = _llm_from_env(env_config, data.get("llm"))
        data.setdefault("workers", env_config.WORKERS)
        return EvaluationConfig(**data)
    except ValidationError as e:
        keys = [".".join(str(p) for p in err["loc"]) for err in e.errors()]
        raise ConfigError(f"invalid evaluation config: {e}", keys=keys) from e
    except TypeError as e:
        raise ConfigError(f"invalid evaluation config: {e}") from e
