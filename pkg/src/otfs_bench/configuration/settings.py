"""
Module: otfs_bench.configuration.settings

Application settings for the OTFS Bench CLI.
Manages application identity and output paths.
"""

from pathlib import Path
from typing import Optional

from otfs_bench.constants import (APP_NAME, APP_VERSION, CHANNEL_DUMP_DIR, DEFAULT_OUTPUT_DIR,
                                  META_FILE_NAME, RESULTS_FILE_NAME, SENSING_DUMP_FILE)
from otfs_bench.types import FilePath


class PathConfig:
    def __init__(self, output_dir: Optional[FilePath] = None):
        self.output_dir: Path = Path(output_dir or DEFAULT_OUTPUT_DIR)
        self.results_file: Path = self.output_dir / RESULTS_FILE_NAME
        self.meta_file: Path = self.output_dir / META_FILE_NAME
        self.channel_dir: Path = self.output_dir / CHANNEL_DUMP_DIR
        self.sensing_file: Path = self.output_dir / SENSING_DUMP_FILE


class ApplicationSettings:
    def __init__(self, output_dir: Optional[FilePath] = None):
        self.version = APP_VERSION
        self.name = APP_NAME
        self.paths = PathConfig(output_dir)
