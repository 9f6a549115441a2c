#!/usr/bin/env python3
"""
E2 Homology Workbench - Main Application
Low-dimensional homology of E_2(A) over finite commutative rings
"""

import sys
from typing import List, Optional

from cli.commands import main as cli_main
from config.config import Config
from utils.logger import setup_logger

LOGGERS = ('e2homlab', 'algebra', 'homology', 'cli', 'database', 'config')


class E2HomLabApp:
    def __init__(self):
        self.loggers = {name: setup_logger(name) for name in LOGGERS}
        self.logger = self.loggers['e2homlab']
        self.logger.debug(f"E2HomLabApp initialized (version {Config.ARTIFACT_VERSION})")

    def run(self, argv: Optional[List[str]] = None) -> int:
        code = cli_main(argv)
        self.logger.debug(f"Exit code {code}")
        return code


# Create global app instance
app_instance = None


def create_app() -> E2HomLabApp:
    """Application factory"""
    global app_instance
    if app_instance is None:
        app_instance = E2HomLabApp()
    return app_instance


def main(argv: Optional[List[str]] = None) -> int:
    return create_app().run(argv)


if __name__ == '__main__':
    sys.exit(main())
