# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Error and warning hierarchy of frontlab.

Every error raised by the package derives from `FrontlabError`. The three branches below it
carry the exit status the command line interface reports for them:

- `ConfigSchemaError` (exit status 2): the experiment configuration is malformed.
- `NumericalFailureError` (exit status 3): a computation failed, the error carries diagnostics.
- `InvariantViolationError` (exit status 4): a computation finished but a declared check failed.

Warnings that do not invalidate a result derive from `FrontlabWarning`.
"""

from typing import Any, Dict, Optional


class FrontlabError(Exception):
    """
    Base class of all errors raised by frontlab.

    Attributes
    ----------
    exit_code : int
        Exit status reported by the command line interface.
    diagnostics : dict
        Machine readable details written next to the artefacts of a failed run.
    """

    exit_code = 1

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigSchemaError(FrontlabError):
    """
    Raised when an experiment configuration does not match the schema.
    """

    exit_code = 2


class UnknownKeyError(ConfigSchemaError):
    """
    Raised when a configuration contains a key the schema does not know. Typo?
    """


class MissingKeyError(ConfigSchemaError):
    """
    Raised when a required configuration key is absent.
    """


class InvalidValueError(ConfigSchemaError):
    """
    Raised when a configuration value has the wrong type or lies outside its admissible range.
    """


class NumericalFailureError(FrontlabError):
    """
    Raised when a numerical procedure cannot deliver a result.
    """

    exit_code = 3


class InvalidKernelError(NumericalFailureError):
    """
    Raised for kernel families with invalid or non-normalizable parameters.
    """


class UnsupportedDensityError(NumericalFailureError):
    """
    Raised when a multi-dimensional density cannot be projected onto a direction.
    """


class InvalidDirectionError(NumericalFailureError):
    """
    Raised when a projection direction is not a unit vector of the density's dimension.
    """


class MGFOutOfRangeError(NumericalFailureError):
    """
    Raised when the moment generating integral is not evaluable (infinite or overflowing) at the requested rate.
    """


class NoFiniteSpeedError(NumericalFailureError):
    """
    Raised when no finite minimal speed exists because the Mollison condition fails.

    Such kernels produce accelerating invasions, see `frontlab.evolution.tracking.accelerating_detector`.
    """


class NoPositiveRootError(NumericalFailureError):
    """
    Raised when the linear dispersion deficit has no positive root for the requested speed.
    """


class ClassificationError(NumericalFailureError):
    """
    Raised when a nonlinearity violates f(0) = f(1) = 0 or a requested classification.
    """


class InvalidCutoffError(NumericalFailureError):
    """
    Raised for cutoff thresholds outside their admissible range.
    """


class MultiWellError(NumericalFailureError):
    """
    Raised when g(u) = u - f(u) has more than one decreasing interval on [0, 1].
    """


class SupersolutionJoinError(NumericalFailureError):
    """
    Raised when the exponential pieces of a supersolution cannot be joined; increase N.
    """


class GridTooNarrowError(NumericalFailureError):
    """
    Raised when a grid cannot hold the kernel support around the points that are tested.
    """


class GridTooCoarseError(NumericalFailureError):
    """
    Raised when a grid is too coarse to resolve a rescaled kernel.
    """


class IterationBudgetError(NumericalFailureError):
    """
    Raised when an iterative solver exhausts its iteration budget.
    """


class SchemeViolationError(NumericalFailureError):
    """
    Raised when monotone iterates lose their ordering; the linearization shift is too small.
    """


class ContinuationDivergenceError(NumericalFailureError):
    """
    Raised when consecutive viscosity steps of a continuation differ by more than the admitted jump.
    """


class NonexistenceError(NumericalFailureError):
    """
    Raised when a front at the requested speed cannot be stabilized, which indicates c < c*.
    """


class NoSignChangeError(NumericalFailureError):
    """
    Raised when a shooting functional has no sign change on its bracket.
    """


class NoCrossingError(NumericalFailureError):
    """
    Raised when a profile or a field does not cross the requested level inside its window.
    """


class InstabilityError(NumericalFailureError):
    """
    Raised when a time step leaves the invariant range [0, 1].
    """


class InsufficientSamplesError(NumericalFailureError):
    """
    Raised when a fit receives fewer samples or a shorter time span than it requires.
    """


class DemoFailureError(NumericalFailureError):
    """
    Raised when the discontinuous limit of the regularized problems does not separate.
    """


class InvariantViolationError(FrontlabError):
    """
    Raised when a finished computation fails one of the checks declared for it.
    """

    exit_code = 4


class FrontlabWarning(UserWarning):
    """
    Base class of the warnings emitted by frontlab.
    """


class TruncationWarning(FrontlabWarning):
    """
    Emitted when a kernel tail is truncated with more omitted mass than requested or a tail weight matters.
    """


class UnattainedInfimumWarning(FrontlabWarning):
    """
    Emitted when a speed minimisation ends on the boundary of its rate interval.
    """


class SmoothnessWarning(FrontlabWarning):
    """
    Emitted when tail asymptotics are requested for a kernel that is not continuously differentiable.
    """
