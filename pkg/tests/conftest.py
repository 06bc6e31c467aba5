"""Shared fixtures: the reference instances and randomized parameter corpora."""

from __future__ import annotations

import math

import numpy as np
import pytest

from chiralwalk import ModelParamsMko, ModelParamsUm
from chiralwalk.profiles import ParameterProfile


def real_profile(left, right, overrides=None):
    return ParameterProfile.two_phase(left, right, overrides, kind="real")


def reference_params(m: int = 1, gamma: float = 0.4) -> ModelParamsUm:
    """Two-phase instance with p(-+inf) = -+0.2, a(-+inf) = -+0.1, real q, b."""
    return ModelParamsUm(
        m=m,
        gamma=real_profile(gamma, gamma),
        p=real_profile(-0.2, 0.2),
        a=real_profile(-0.1, 0.1),
        q=ParameterProfile.constant(math.sqrt(0.96)),
        b=ParameterProfile.constant(math.sqrt(0.99)),
    )


def reference_mko_params(gamma: float = 0.4, phi: float = 0.15) -> ModelParamsMko:
    """Two-step instance whose reduction matches reference_params with m = 2."""
    t1 = math.asin(0.2)
    t2 = math.asin(0.1)
    return ModelParamsMko(
        gamma=real_profile(gamma, gamma),
        phi=real_profile(phi, phi),
        theta1=real_profile(t1, -t1),
        theta2=real_profile(-t2, t2),
    )


def random_real_profile(rng, lo, hi, sites=2):
    overrides = {int(s): rng.uniform(lo, hi) for s in rng.integers(-4, 5, size=sites)}
    return ParameterProfile.two_phase(rng.uniform(lo, hi), rng.uniform(lo, hi),
                                      overrides, kind="real")


def _unimodular_partner(rng, u: ParameterProfile) -> ParameterProfile:
    """Complex profile v with u(x)^2 + |v(x)|^2 = 1 sitewise."""
    def draw(x):
        mag = math.sqrt(max(0.0, 1.0 - u.value(x).real ** 2))
        return mag * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))

    far = u.support_radius + 3
    overrides = {x: draw(x) for x in u.overrides}
    return ParameterProfile(draw(-far), draw(far), overrides)


def random_um_params(rng, m=None, gamma_zero=False, gamma_range=1.0, sites=2) -> ModelParamsUm:
    m = int(m if m is not None else rng.choice([-3, -2, -1, 1, 2, 3]))
    p = random_real_profile(rng, -0.95, 0.95, sites)
    a = random_real_profile(rng, -0.95, 0.95, sites)
    gamma = (ParameterProfile.constant(0.0, "real") if gamma_zero
             else random_real_profile(rng, -gamma_range, gamma_range, sites))
    return ModelParamsUm(m=m, gamma=gamma, p=p, a=a,
                         q=_unimodular_partner(rng, p),
                         b=_unimodular_partner(rng, a))


def random_mko_params(rng, sites=2) -> ModelParamsMko:
    return ModelParamsMko(
        gamma=random_real_profile(rng, -0.6, 0.6, sites),
        phi=random_real_profile(rng, -3.0, 3.0, sites),
        theta1=random_real_profile(rng, -3.0, 3.0, sites),
        theta2=random_real_profile(rng, -3.0, 3.0, sites),
    )


def random_fredholm_params(rng, min_margin=1e-6, **kwargs) -> ModelParamsUm:
    """Rejection-sample until both endpoint margins clear ``min_margin``."""
    from chiralwalk import asymptotics, p_gamma
    from chiralwalk.profiles import STARS

    while True:
        params = random_um_params(rng, **kwargs)
        margins = [
            abs(abs(p_gamma(asymptotics(params, star))) - abs(asymptotics(params, star).a))
            for star in STARS
        ]
        if min(margins) > min_margin:
            return params


@pytest.fixture(scope="session")
def fredholm_corpus():
    """200 random Fredholm parameter sets plus all 16 endpoint sign patterns."""
    rng = np.random.default_rng(20250808)
    corpus = [random_fredholm_params(rng) for _ in range(200)]
    for sp_minus in (-1, 1):
        for sp_plus in (-1, 1):
            for sa_minus in (-1, 1):
                for sa_plus in (-1, 1):
                    corpus.append(ModelParamsUm(
                        m=int(rng.choice([-3, -2, -1, 1, 2, 3])),
                        gamma=real_profile(0.4, 0.4),
                        p=real_profile(0.2 * sp_minus, 0.2 * sp_plus),
                        a=real_profile(0.1 * sa_minus, 0.1 * sa_plus),
                        q=ParameterProfile.constant(math.sqrt(0.96)),
                        b=ParameterProfile.constant(math.sqrt(0.99)),
                    ))
    return corpus
