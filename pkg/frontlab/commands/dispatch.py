# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""Dispatch of a subcommand to its runner, with the manifest and the exit status of the run."""

import logging
from typing import Optional

from ..config.experiment import ExperimentConfig
from ..config.output import Artefacts
from ..exceptions import FrontlabError, InvalidValueError, InvariantViolationError
from .runners import RUNNERS

logger = logging.getLogger(__name__)


def run(command: str, config: ExperimentConfig, artefacts: Optional[Artefacts] = None) -> int:
    """
    Run a subcommand, write its artefacts and the manifest and return the exit status.

    Parameters
    ----------
    command : str
        One of speed, profile, evolve, demo-nonunique, check-limit and check-supersolution.
    config : ExperimentConfig
        The resolved configuration.
    artefacts : Artefacts, optional
        Where the files go, by default the output directory of ``config``.

    Returns
    -------
    int
        0 when every check of the command passed, 4 when one failed and the exit code of the
        error otherwise: 2 for configuration errors, 3 for numerical failures. The error and its
        diagnostics, or the failed checks, are written to diagnostics.json.
    """
    artefacts = artefacts or Artefacts(config.output_dir)
    try:
        if command not in RUNNERS:
            raise InvalidValueError(f"unknown command '{command}', choose from {', '.join(RUNNERS)}")
        checks = RUNNERS[command](config, artefacts)
        failed = sorted(name for name, passed in checks.items() if not passed)
        if failed:
            raise InvariantViolationError(
                f"{command}: checks failed: {', '.join(failed)}", diagnostics={"checks": checks, "failed": failed}
            )
        status = 0
    except FrontlabError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        artefacts.json(
            "diagnostics.json",
            {
                "error": type(exc).__name__,
                "message": str(exc),
                "exit_code": exc.exit_code,
                "diagnostics": exc.diagnostics,
            },
        )
        status = exc.exit_code
    artefacts.manifest(command, config.resolved, status)
    logger.info("%s finished with exit status %d", command, status)
    return status
