# Copyright (C) 2026 The reenet Authors
# SPDX-License-Identifier: Apache-2.0
"""Recursive early-exit networks with learned offloading."""

from ._reenet import *  # noqa: F401,F403
from ._reenet import CONFIG_VERSION, ConfigError, ShapeError  # noqa: F401

__version__ = "0.1.0"
