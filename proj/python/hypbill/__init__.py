"""Hyperbolic polygonal billiards: Python front end over the C++ core."""

import json

from . import _hypbill
from ._hypbill import InputError, area as _area, orbifold_area

__all__ = ["InputError", "regular", "area", "simulate", "realize", "classify", "compare", "orbifold_area", "bound_check"]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def _word(w):
    return w if isinstance(w, str) else ",".join(str(b) for b in w)


def regular(n, p, q):
    """Regular n-gon with every angle p*pi/q, as a polygon dict."""
    return json.loads(_hypbill.regular(n, p, q))


def area(polygon):
    return _area(_text(polygon))


def simulate(polygon, start=(0.0, 0.0), theta=0.0, bounces=20):
    return json.loads(_hypbill.simulate(_text(polygon), start[0], start[1], theta, bounces))


def realize(polygon, word):
    return json.loads(_hypbill.realize(_text(polygon), _word(word)))


def classify(polygon):
    return json.loads(_hypbill.classify(_text(polygon)))


def compare(p1, p2, samples=200, length=40, seed=1):
    return json.loads(_hypbill.compare(_text(p1), _text(p2), samples, length, seed))


def bound_check(cover):
    return json.loads(_hypbill.bound_check(_text(cover)))
