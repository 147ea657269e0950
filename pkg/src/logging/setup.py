"""Logging configuration setup."""
import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Dict, Any, Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(config: Dict[str, Any], level: Optional[str] = None):
    """
    Configure logging with a stderr console handler and an optional rotating file handler.

    Reports go to stdout, so log records never share a stream with them.

    Args:
        config: Configuration dictionary with logging settings
        level: Level overriding logging.level (e.g. from --log-level)
    """
    log_config = config.get('logging', {})
    log_level = getattr(logging, (level or log_config.get('level', 'INFO')).upper())
    log_dir = log_config.get('log_dir')
    max_size_bytes = log_config.get('max_size_mb', 10) * 1024 * 1024
    backup_count = log_config.get('backup_count', 5)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    log_file = None
    if log_dir:
        log_dir = os.path.expanduser(log_dir)
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        log_file = os.path.join(log_dir, 'qnc-lens.log')
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=max_size_bytes,
            backupCount=backup_count,
            encoding='utf-8'
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    logging.info(f"Logging configured: level={logging.getLevelName(log_level)}, file={log_file}")
