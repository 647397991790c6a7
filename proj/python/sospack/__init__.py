"""Polynomial shape learning and SOS packing certification."""

import json

import numpy as np

from . import _sospack

__version__ = _sospack.__version__
InvalidArgument = _sospack.InvalidArgument


def _dumps(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def learn_shape(points, degree=6, box=(-1.1, 1.1), radius=None, margin=1e-4, priors=(),
                max_iters=None):
    """Learns J with J(x_i) <= -margin on the cloud.

    `box` is either a (lo, hi) pair applied to every axis or a pair of
    per-axis arrays. Returns a dict with "status", "solver_status",
    "message" and, on success, the shape model under "shape".
    """
    points = np.ascontiguousarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be an (N, n) array")
    n = points.shape[1]
    lower = np.broadcast_to(np.asarray(box[0], dtype=float), (n,)).copy()
    upper = np.broadcast_to(np.asarray(box[1], dtype=float), (n,)).copy()
    result = _sospack.learn_shape(points, degree=degree, lower=lower, upper=upper, radius=radius,
                                  margin=margin, priors=list(priors), max_iters=max_iters)
    return json.loads(result)


def certify(scene, degree=None, gamma_cap=None, jobs=1, grid=0, samples=20000, seed=0):
    """Certifies a scene (dict or JSON text) and returns the report dict."""
    return json.loads(_sospack.certify(_dumps(scene), degree=degree, gamma_cap=gamma_cap,
                                       jobs=jobs, grid=grid, samples=samples, seed=seed))


def oracle_check(scene, grid=0, samples=20000, seed=0, jobs=1):
    return json.loads(_sospack.oracle_check(_dumps(scene), grid=grid, samples=samples, seed=seed,
                                            jobs=jobs))


def evaluate(polynomial, points):
    """Evaluates a polynomial (or shape) dict at each row of `points`."""
    points = np.ascontiguousarray(np.atleast_2d(points), dtype=float)
    return _sospack.evaluate(_dumps(polynomial), points)


def sample_boundary(polynomial, radius=None, resolution=360):
    if radius is None:
        radius = polynomial["radius"]
    return _sospack.sample_boundary(_dumps(polynomial), radius, resolution)


def fixture_kinds():
    return _sospack.fixture_kinds()


def generate_fixture(kind, seed=0, size=0):
    """Returns {file name: file content} for one fixture kind."""
    return dict(_sospack.generate_fixture(kind, seed=seed, size=size))


def sha256(data):
    return _sospack.sha256(data if isinstance(data, bytes) else data.encode())


__all__ = [
    "InvalidArgument", "certify", "evaluate", "fixture_kinds", "generate_fixture", "learn_shape",
    "oracle_check", "sample_boundary", "sha256",
]
