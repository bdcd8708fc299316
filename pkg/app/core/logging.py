"""
Standard logging configuration for the application
"""
import logging
import logging.config
import sys
from pathlib import Path
from typing import Dict, Any

from app.core.config import settings


def get_logging_config() -> Dict[str, Any]:
    """Get logging configuration based on settings"""

    # Determine log level based on environment
    log_level = settings.LOG_LEVEL.upper() if settings.LOG_LEVEL else ("DEBUG" if settings.DEBUG else "WARNING")
    console_formatter = "json" if settings.LOG_FORMAT == "json" else "standard"

    handlers = ["console"]

    # Base configuration
    config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
            "detailed": {
                "format": "%(asctime)s [%(levelname)s] %(name)s:%(lineno)d: %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
            "json": {
                "()": "pythonjsonlogger.jsonlogger.JsonFormatter",
                "format": "%(asctime)s %(levelname)s %(name)s %(message)s",
            },
        },
        "handlers": {
            # stdout carries answers; diagnostics go to stderr
            "console": {
                "class": "logging.StreamHandler",
                "level": log_level,
                "formatter": console_formatter,
                "stream": sys.stderr,
            },
        },
        "loggers": {
            # Root logger
            "": {
                "handlers": handlers,
                "level": log_level,
                "propagate": False,
            },
            # Application loggers
            "app": {
                "handlers": handlers,
                "level": log_level,
                "propagate": False,
            },
            "app.core": {
                "handlers": handlers,
                "level": log_level,
                "propagate": False,
            },
            "app.cli": {
                "handlers": handlers,
                "level": log_level,
                "propagate": False,
            },
            "app.services": {
                "handlers": handlers,
                "level": log_level,
                "propagate": False,
            },
        },
    }

    if settings.LOG_TO_FILE:
        log_dir = Path(settings.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)
        config["handlers"]["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "DEBUG",
            "formatter": "json" if settings.LOG_FORMAT == "json" else "detailed",
            "filename": str(log_dir / "mwq.log"),
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
        }
        config["handlers"]["error_file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "ERROR",
            "formatter": "detailed",
            "filename": str(log_dir / "error.log"),
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
        }
        for logger_config in config["loggers"].values():
            logger_config["handlers"] = handlers + ["file"]
        config["loggers"][""]["handlers"].append("error_file")

    return config


def setup_logging() -> None:
    """Setup logging configuration"""
    config = get_logging_config()
    logging.config.dictConfig(config)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with proper naming"""
    return logging.getLogger(f"app.{name}")


# Create a default logger for the logging module itself
logger = get_logger("core.logging")
