"""Configuration loading and validation."""
import yaml
import os
from math import gcd
from typing import Any, Dict
import logging

logger = logging.getLogger(__name__)


class ConfigLoader:
    """Load and validate configuration from YAML file."""

    # Default configuration values
    DEFAULTS = {
        'run': {
            'k': 2,
            'l': 3,
            'd': 2,
            'q': 0.5,
            'dim': 300,
            'seed': 42,
            'format': 'text',
            'out': None
        },
        'ncalg': {
            'max_terms': 1000000
        },
        'sphere': {
            'n1': 24,
            'n2': 24,
            'q': 0.7,
            'words': 200,
            'word_length': 6,
            'confluence_words': 500,
            'confluence_length': 10,
            'relation_pairs': 50,
            'oracle_tolerance': 1e-9
        },
        'pairing': {
            'check_window': 10,
            'ratio_margin': 0.001,
            'rounding_threshold': 0.25,
            'max_bound': 1e-6
        },
        'logging': {
            'level': 'INFO',
            'log_dir': None,
            'max_size_mb': 10,
            'backup_count': 5
        }
    }

    def __init__(self, config_path: str = 'config.yaml'):
        """
        Initialize configuration loader.

        Args:
            config_path: Path to YAML configuration file
        """
        self.config_path = config_path
        self.config: Dict[str, Any] = {}

    def load(self) -> Dict[str, Any]:
        """
        Load configuration from YAML file with defaults.

        Returns:
            Dict containing merged configuration (file + defaults)
        """
        self.config = self._deep_copy_dict(self.DEFAULTS)

        if os.path.exists(self.config_path):
            with open(self.config_path, 'r', encoding='utf-8') as f:
                file_config = yaml.safe_load(f) or {}

            self.config = self._merge_configs(self.config, file_config)
            logger.info(f"Configuration loaded from: {self.config_path}")
        else:
            logger.warning(f"Config file not found: {self.config_path}, using defaults")

        self._validate()
        self._expand_paths()

        return self.config

    def _merge_configs(self, base: Dict, override: Dict) -> Dict:
        """
        Recursively merge two configuration dictionaries.

        Args:
            base: Base configuration (defaults)
            override: Override configuration (from file)

        Returns:
            Merged configuration dictionary
        """
        result = base.copy()
        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value
        return result

    def _deep_copy_dict(self, d: Dict) -> Dict:
        """Deep copy a dictionary."""
        result = {}
        for key, value in d.items():
            if isinstance(value, dict):
                result[key] = self._deep_copy_dict(value)
            else:
                result[key] = value
        return result

    def _validate(self):
        """Validate configuration values."""
        run = self.config['run']

        k, l, d = run['k'], run['l'], run['d']
        if k < 1 or l < 1 or gcd(k, l) != 1:
            raise ValueError(f"Invalid weights: k={k}, l={l} (must be coprime positive integers)")
        if d < 1:
            raise ValueError(f"Invalid lens level: d={d} (must be >= 1)")

        q = run['q']
        if not (0 < q < 1):
            raise ValueError(f"Invalid q: {q} (must be in (0, 1))")

        if run['dim'] < 32:
            raise ValueError(f"Invalid dimension: {run['dim']} (must be >= 32)")

        valid_formats = ['text', 'json']
        if run['format'] not in valid_formats:
            raise ValueError(f"Invalid format: {run['format']} (must be one of {valid_formats})")

        if self.config['ncalg']['max_terms'] < 1:
            raise ValueError(f"Invalid max_terms: {self.config['ncalg']['max_terms']} (must be >= 1)")

        sphere = self.config['sphere']
        if not (0 < sphere['q'] < 1):
            raise ValueError(f"Invalid sphere q: {sphere['q']} (must be in (0, 1))")
        if sphere['n1'] < 4 or sphere['n2'] < 4:
            raise ValueError(f"Invalid sphere grid: n1={sphere['n1']}, n2={sphere['n2']} (must be >= 4)")

        pairing = self.config['pairing']
        if pairing['check_window'] < 2:
            raise ValueError(f"Invalid check window: {pairing['check_window']} (must be >= 2)")
        if not (0 < pairing['rounding_threshold'] <= 0.5):
            raise ValueError(f"Invalid rounding threshold: {pairing['rounding_threshold']} (must be in (0, 0.5])")
        if pairing['max_bound'] <= 0:
            raise ValueError(f"Invalid max bound: {pairing['max_bound']} (must be > 0)")

        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        log_level = self.config['logging']['level'].upper()
        if log_level not in valid_levels:
            raise ValueError(f"Invalid log level: {log_level} (must be one of {valid_levels})")

        logger.info("Configuration validated successfully")

    def _expand_paths(self):
        """Expand ~ in file paths to home directory."""
        for section, key in (('logging', 'log_dir'), ('run', 'out')):
            if self.config[section][key]:
                self.config[section][key] = os.path.expanduser(self.config[section][key])

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get configuration value by dot-separated key path.

        Args:
            key_path: Dot-separated path (e.g., 'run.q')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key_path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value
