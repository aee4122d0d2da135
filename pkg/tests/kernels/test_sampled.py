# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.exceptions import InvalidKernelError, MGFOutOfRangeError, TruncationWarning
from frontlab.kernels import (
    Algebraic,
    Bump,
    Gaussian,
    Laplace,
    Uniform,
    build_kernel,
    is_c1,
    kernel_summary,
    lambda_evaluable_max,
    mgf,
    mollison_check,
    reflect,
)


@pytest.fixture(name="symmetric_uniform")
def fixture_symmetric_uniform():
    return build_kernel(Uniform(-1.0, 1.0), 0.01)


@pytest.fixture(name="shifted_uniform")
def fixture_shifted_uniform():
    return build_kernel(Uniform(1.0, 3.0), 0.01)


def test_uniform_moments(symmetric_uniform):
    assert symmetric_uniform.mass == approx(1.0, abs=1e-12)
    assert symmetric_uniform.nu == approx(0.5, abs=1e-12)
    assert symmetric_uniform.alpha == approx(0.166675, rel=1e-4)
    assert symmetric_uniform.mean == 0.0
    assert symmetric_uniform.beta == 0.0
    assert symmetric_uniform.metadata["truncation_radius"] is None
    assert symmetric_uniform.metadata["sampling"] == "cell average"


def test_uniform_is_sampled_symmetrically(symmetric_uniform):
    assert symmetric_uniform.values == approx(symmetric_uniform.values[::-1], abs=0.0)
    assert symmetric_uniform.radius >= 1.0
    assert not symmetric_uniform.values.flags.writeable


def test_shifted_uniform_drift(shifted_uniform):
    assert shifted_uniform.mean == approx(2.0, rel=1e-9)
    assert shifted_uniform.beta == approx(-2.0, rel=1e-9)
    assert shifted_uniform.support == (1.0, 3.0)


@pytest.mark.parametrize(
    "kernel_name, lam, expected",
    [
        ("symmetric_uniform", 1.0, np.sinh(1.0)),
        ("shifted_uniform", 1.0, (np.exp(-1.0) - np.exp(-3.0)) / 2.0),
        ("symmetric_uniform", 0.0, 1.0),
    ],
)
def test_quadrature_mgf(kernel_name, lam, expected, request):
    kernel = request.getfixturevalue(kernel_name)
    assert mgf(kernel, lam) == approx(expected, rel=1e-4)
    assert mgf(kernel, lam, method="auto") == approx(expected, rel=1e-12)


def test_mgf_rejects_unknown_method(symmetric_uniform):
    with pytest.raises(ValueError):
        mgf(symmetric_uniform, 1.0, method="simpson")


def test_mgf_out_of_range(symmetric_uniform):
    with pytest.raises(MGFOutOfRangeError):
        mgf(symmetric_uniform, 900.0)


def test_mgf_analytic_unavailable():
    kernel = build_kernel(Bump(0.0, 1.0), 0.05)
    with pytest.raises(MGFOutOfRangeError):
        mgf(kernel, 1.0, method="analytic")
    assert mgf(kernel, 1.0, method="auto") == approx(mgf(kernel, 1.0))


def test_gaussian_truncation():
    kernel = build_kernel(Gaussian(0.0, 1.0), 0.05)
    radius = kernel.metadata["truncation_radius"]
    assert 6.5 < radius < 7.5
    assert kernel.metadata["omitted_mass"] == approx(1e-12, rel=1e-3)
    assert kernel.alpha == approx(0.5, rel=1e-3)
    assert is_c1(kernel)


def test_truncated_tail_warns_in_mgf():
    kernel = build_kernel(Laplace(0.0, 1.0), 0.1)
    with pytest.warns(TruncationWarning):
        mgf(kernel, 0.9)


def test_algebraic_kernel_hits_radius_cap():
    with pytest.warns(TruncationWarning, match="radius cap"):
        kernel = build_kernel(Algebraic(3.0), 0.5)
    assert kernel.metadata["truncation_radius"] == 2000.0
    result = mollison_check(kernel)
    assert not result.satisfied
    assert result.witness is None
    assert "no finite speed" in result.diagnosis


@pytest.mark.parametrize(
    "family, witness",
    [
        (Uniform(-1.0, 1.0), 1.0),
        (Gaussian(1.0, 0.5), 1.0),
        (Laplace(0.0, 0.5), 1.0),
    ],
)
def test_mollison_satisfied(family, witness):
    result = mollison_check(build_kernel(family, 0.05))
    assert result.satisfied
    assert result.witness == approx(witness)


def test_reflect(shifted_uniform):
    reflected = reflect(shifted_uniform)
    assert reflected.support == (-3.0, -1.0)
    assert reflected.mean == approx(-2.0)
    assert reflected.beta == approx(2.0)
    assert reflected.family == Uniform(-3.0, -1.0)
    assert reflected.values == approx(shifted_uniform.values[::-1], abs=0.0)
    assert mgf(reflected, 1.0) == approx(mgf(shifted_uniform, -1.0), rel=1e-12)


def test_reflect_twice_is_identity(shifted_uniform):
    twice = reflect(reflect(shifted_uniform))
    assert twice.values == approx(shifted_uniform.values, abs=0.0)
    assert twice.family == shifted_uniform.family
    assert twice.support == shifted_uniform.support


@pytest.mark.parametrize(
    "family, expected",
    [
        (Uniform(-1.0, 1.0), 50.0),
        (Uniform(10.0, 30.0), 700.0 / 30.0),
        (Laplace(0.0, 2.0), 0.4995),
        (Gaussian(0.0, 1.0), 0.999 * np.sqrt(1400.0)),
    ],
)
def test_lambda_evaluable_max(family, expected):
    assert lambda_evaluable_max(build_kernel(family, 0.05)) == approx(expected, rel=1e-9)


def test_convolution_preserves_constants(shifted_uniform):
    u = np.full(400, 0.3)
    assert shifted_uniform.convolve(u, left=0.3, right=0.3) == approx(u, abs=1e-12)


def test_to_csv(tmp_path, symmetric_uniform):
    path = tmp_path / "kernel.csv"
    symmetric_uniform.to_csv(path)
    assert path.read_text().splitlines()[0] == "x,J"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data[:, 0] == approx(symmetric_uniform.x)
    assert data[:, 1] == approx(symmetric_uniform.values)


def test_kernel_summary(shifted_uniform):
    summary = kernel_summary(shifted_uniform)
    assert summary["family"] == "uniform"
    assert summary["nodes"] == len(shifted_uniform.values)
    assert summary["beta"] == approx(-2.0)


@pytest.mark.parametrize("h", [0.0, -0.1])
def test_invalid_spacing(h):
    with pytest.raises(InvalidKernelError):
        build_kernel(Uniform(), h)


def test_unresolved_kernel():
    with pytest.raises(InvalidKernelError, match="not resolved"):
        build_kernel(Bump(0.0, 0.01), 1.0)
