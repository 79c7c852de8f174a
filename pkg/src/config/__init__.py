"""Config Package - Configuration Management"""
from .settings import *
from .logging_setup import setup_logging
