import logging
import os
from logging.handlers import RotatingFileHandler

from dotenv import load_dotenv

load_dotenv()


def setup_logger(log_name='spectral_green', log_level=None):
    """
    Configure logging with both file and console handlers.

    Args:
        log_name (str): Name of the logger and log file
        log_level (int): Logging level (e.g., logging.INFO, logging.DEBUG).
            Falls back to SPECTRAL_GREEN_LOG_LEVEL, then INFO.

    Returns:
        logger: Configured logger instance
    """
    if log_level is None:
        log_level = logging.getLevelName(os.getenv('SPECTRAL_GREEN_LOG_LEVEL', 'INFO').upper())
        if not isinstance(log_level, int):
            log_level = logging.INFO

    logger = logging.getLogger(log_name)
    logger.setLevel(log_level)

    # Prevent logging from propagating to the root logger
    logger.propagate = False

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Sweeps write CSV to stdout, so console logging goes to stderr
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler.setLevel(log_level)
    handlers = [console_handler]

    if os.getenv('SPECTRAL_GREEN_LOG_TO_FILE', 'true').lower() in ('1', 'true', 'yes'):
        log_dir = os.getenv('SPECTRAL_GREEN_LOG_DIR', 'logs')
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)
        file_handler = RotatingFileHandler(
            os.path.join(log_dir, f'{log_name}.log'),
            maxBytes=10485760,  # 10MB
            backupCount=5
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(log_level)
        handlers.append(file_handler)

    # Add handlers to logger if they haven't been added already
    if not logger.handlers:
        for handler in handlers:
            logger.addHandler(handler)

    return logger

# Create default logger instance
logger = setup_logger()
