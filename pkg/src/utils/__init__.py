"""Utils Package - Utility Functions"""
from .uuid_generator import generate_checksum, generate_run_id, text_checksum

__all__ = ["generate_run_id", "generate_checksum", "text_checksum"]
