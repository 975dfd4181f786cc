"""Shared test fixtures: the two published k=10 example curves."""

from dataclasses import dataclass

import pytest


@dataclass(frozen=True)
class PublishedCurve:
    bits: int
    d: int
    q: int
    n: int
    a: int
    b: int


EXAMPLE_149 = PublishedCurve(
    bits=149,
    d=1666603,
    q=503189899097385532598615948567975432740967203,
    n=503189899097385532598571084778608176410973351,
    a=-3,
    b=78778770898368212452154728282767760988008151,
)

EXAMPLE_196 = PublishedCurve(
    bits=196,
    d=579003643,
    q=61099963271083128746073769567944870354270161646150914794603,
    n=61099963271083128746073769567450502219087145916434839626301,
    a=-3,
    b=1112775869471458154129950648198203893613615552476491488167,
)


@pytest.fixture(params=[EXAMPLE_149, EXAMPLE_196], ids=["149bit", "196bit"])
def published_curve(request):
    return request.param
