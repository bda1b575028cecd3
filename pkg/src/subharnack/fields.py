"""Closed-form scalar fields with exact derivatives, and seeded random families.

A :class:`Field` is a scalar function on R^dim whose partial derivatives up to
third order are produced exactly by jet evaluation; no finite differences are
used anywhere in the analytic modules.  Fields compose under the usual
arithmetic, and taking a partial derivative yields a new field with one less
exact derivative order available.

:class:`SpaceTimeField` adds a time slot: ``at(t)`` freezes time (full spatial
order 3), ``dt(t)`` is the exact time-derivative field (spatial order 2, which
is all the consumers of time derivatives need).
"""

from __future__ import annotations

import numpy as np

from . import jets
from .jets import Jet

__all__ = ["Field", "SpaceTimeField", "coordinate", "const",
           "random_polytrig_field", "random_polytrig_spacetime"]


class Field:
    """Analytic scalar field on R^dim backed by a jet-evaluating closure.

    ``order`` is the highest derivative order still exact for this field;
    ``depth`` counts how many derivative orders the expression consumes from
    the coordinate seeds (a partial-derivative field has depth one more than
    its parent), so evaluation knows how deep to seed.
    """

    __slots__ = ("dim", "order", "depth", "_fn")

    __array_ufunc__ = None

    def __init__(self, dim: int, fn, order: int = 3, depth: int = 0):
        self.dim = dim
        self._fn = fn  # list[Jet] (coordinate jets) -> Jet
        self.order = order
        self.depth = depth

    def jet(self, pts: np.ndarray, order: int | None = None) -> Jet:
        want = self.order if order is None else min(order, self.order)
        seed = min(3, want + self.depth)
        xs = jets.variables(np.asarray(pts, dtype=float), order=seed)
        return self._fn(xs)

    def value(self, pts: np.ndarray) -> np.ndarray:
        return self.jet(pts, order=0).val

    # -- algebra ------------------------------------------------------------

    def _lift(self, other) -> "Field":
        if isinstance(other, Field):
            return other
        return const(self.dim, other)

    def _binary(self, other, op) -> "Field":
        o = self._lift(other)
        f, g = self._fn, o._fn
        return Field(self.dim, lambda xs: op(f(xs), g(xs)),
                     order=min(self.order, o.order),
                     depth=max(self.depth, o.depth))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __neg__(self):
        f = self._fn
        return Field(self.dim, lambda xs: -f(xs), order=self.order,
                     depth=self.depth)

    def __pow__(self, p: int):
        f = self._fn
        return Field(self.dim, lambda xs: f(xs) ** p, order=self.order,
                     depth=self.depth)

    def apply(self, ufunc) -> "Field":
        """Compose with a univariate jet function such as jets.sin."""
        f = self._fn
        return Field(self.dim, lambda xs: ufunc(f(xs)), order=self.order,
                     depth=self.depth)

    def partial(self, mu: int) -> "Field":
        f = self._fn
        return Field(self.dim, lambda xs: f(xs).partial(mu),
                     order=self.order - 1, depth=self.depth + 1)


def coordinate(dim: int, mu: int) -> Field:
    return Field(dim, lambda xs: xs[mu])


def const(dim: int, value) -> Field:
    value = np.asarray(value, dtype=float)
    return Field(dim, lambda xs: Jet.const(value, xs[0].m, xs[0].order))


class SpaceTimeField:
    """Scalar field on R x R^dim; slot 0 of the joint jet space is time."""

    __slots__ = ("dim", "_fn")

    def __init__(self, dim: int, fn):
        self.dim = dim
        self._fn = fn  # (t_jet, list of coordinate jets) -> Jet

    def at(self, t: float) -> Field:
        fn = self._fn

        def frozen(xs):
            return fn(Jet.const(float(t), xs[0].m, xs[0].order), xs)

        return Field(self.dim, frozen, order=3)

    def dt(self, t: float) -> Field:
        """Exact time-derivative field; spatial derivatives valid to order 2.

        The closure rebuilds a joint (t, x) jet from the values of the incoming
        coordinate seeds, which is sound because fields are only ever evaluated
        on raw coordinate seeds.
        """
        fn = self._fn
        dim = self.dim

        def slice_fn(xs):
            vals = np.broadcast_arrays(*[x.val for x in xs])
            pts = np.stack(vals, axis=-1)
            tx = np.concatenate(
                [np.broadcast_to(float(t), pts.shape[:-1] + (1,)), pts], axis=-1)
            txs = jets.variables(tx, order=3)
            joint = fn(txs[0], txs[1:])
            return Jet(joint.g[..., 0], joint.h[..., 0, 1:],
                       joint.c[..., 0, 1:, 1:], None, m=dim, order=2)

        return Field(dim, slice_fn, order=2)


# -- seeded random test-function family -------------------------------------
#
# Products of {1, x, y, z, x^2, x*y, sin 2pi x, cos 2pi y, sin 2pi z} with
# coefficients drawn uniformly from [-1, 1]; spans enough jet space to make
# every identity nontrivial while keeping all quantities O(1).

_TWO_PI = 2.0 * np.pi


def _atom_builders(dim: int):
    n = (dim - 1) // 2
    zc = dim - 1
    builders = [lambda xs: Jet.const(1.0, xs[0].m, xs[0].order)]
    for i in range(n):
        xi, yi = i, n + i
        builders += [
            lambda xs, a=xi: xs[a],
            lambda xs, a=yi: xs[a],
            lambda xs, a=xi: xs[a] * xs[a],
            lambda xs, a=xi, b=yi: xs[a] * xs[b],
            lambda xs, a=xi: jets.sin(_TWO_PI * xs[a]),
            lambda xs, a=yi: jets.cos(_TWO_PI * xs[a]),
        ]
    builders += [
        lambda xs: xs[zc],
        lambda xs: jets.sin(_TWO_PI * xs[zc]),
    ]
    return builders


def random_polytrig_field(dim: int, rng: np.random.Generator,
                          batch_shape: tuple = ()) -> Field:
    """Random field; with a batch shape, each batch entry is its own draw."""
    builders = _atom_builders(dim)
    coeffs = rng.uniform(-1.0, 1.0, size=batch_shape + (len(builders),))

    def fn(xs):
        acc = Jet.const(np.zeros(batch_shape), xs[0].m, xs[0].order)
        for idx, build in enumerate(builders):
            acc = acc + coeffs[..., idx] * build(xs)
        return acc

    return Field(dim, fn)


def random_polytrig_spacetime(dim: int, rng: np.random.Generator) -> SpaceTimeField:
    """Random time family f0 + t*f1 + sin(t)*f2 of polytrig fields."""
    f0 = random_polytrig_field(dim, rng)
    f1 = random_polytrig_field(dim, rng)
    f2 = random_polytrig_field(dim, rng)

    def fn(tj, xs):
        return f0._fn(xs) + tj * f1._fn(xs) + jets.sin(tj) * f2._fn(xs)

    return SpaceTimeField(dim, fn)
