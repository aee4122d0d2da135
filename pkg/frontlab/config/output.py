# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Run artefacts: CSV tables, JSON summaries and the manifest of a run.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np

from .. import __version__

logger = logging.getLogger(__name__)


def to_builtin(value: Any) -> Any:
    """Turn numpy scalars and arrays, enums, paths and tuples into JSON types."""
    if isinstance(value, Mapping):
        return {str(key): to_builtin(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(item) for item in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    return value


def write_csv(path: Path, columns: Mapping[str, Sequence[float]]) -> None:
    """Write equally long columns with a header line and no comment marker."""
    data = np.column_stack([np.asarray(values, dtype=float) for values in columns.values()])
    np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="")


def write_json(path: Path, data: Mapping[str, Any]) -> None:
    with open(path, "w", encoding="UTF-8") as fobj:
        json.dump(to_builtin(data), fobj, indent=2, sort_keys=True, default=str)
        fobj.write("\n")


@dataclass
class Artefacts:
    """
    The files a command writes into its output directory.

    Attributes
    ----------
    directory : Path
        Output directory, created on first use.
    names : List[str]
        File names written so far, in order.
    """

    directory: Path
    names: List[str] = field(default_factory=list)

    def path(self, name: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        if name not in self.names:
            self.names.append(name)
        return self.directory / name

    def csv(self, name: str, columns: Mapping[str, Sequence[float]]) -> Path:
        path = self.path(name)
        write_csv(path, columns)
        return path

    def json(self, name: str, data: Mapping[str, Any]) -> Path:
        path = self.path(name)
        write_json(path, data)
        return path

    def save(self, name: str, item) -> Path:
        """Write an object with a ``to_csv`` method, such as a profile, a kernel or a front track."""
        path = self.path(name)
        item.to_csv(path)
        return path

    def manifest(self, command: str, resolved: Dict[str, Any], status: int) -> Path:
        """
        Write manifest.json with the resolved configuration, the version and the artefact list.
        """
        path = self.directory / "manifest.json"
        self.directory.mkdir(parents=True, exist_ok=True)
        manifest = {
            "command": command,
            "config": resolved,
            "version": __version__,
            "artefacts": list(self.names),
            "exit_status": status,
        }
        write_json(path, manifest)
        logger.info("wrote %d artefacts and the manifest to %s", len(self.names), self.directory)
        return path
