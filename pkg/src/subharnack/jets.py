"""Forward-mode automatic differentiation with truncated multivariate Taylor jets.

A :class:`Jet` carries the value and the exact partial-derivative tensors of a
scalar expression, up to third order, in ``m`` independent variables.  All
blocks accept an arbitrary leading batch shape, so a whole sample of evaluation
points (or a whole family of randomly drawn coefficients) is differentiated in
one vectorized pass.  The derivative tensors are stored fully symmetric.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "variables", "constant", "sin", "cos", "exp", "log", "sqrt",
           "sinh", "cosh", "tanh"]


def _sym3(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Symmetrized rank-3 product H_ij g_k + H_ik g_j + H_jk g_i."""
    return (np.einsum("...ij,...k->...ijk", h, g)
            + np.einsum("...ik,...j->...ijk", h, g)
            + np.einsum("...jk,...i->...ijk", h, g))


class Jet:
    """Taylor coefficients (value, gradient, Hessian, third tensor) of order <= 3.

    ``order`` states how many derivative blocks are valid; blocks beyond it are
    None.  Arithmetic degrades to the minimum order of the operands, which is
    how consumers that differentiate an already-differentiated quantity keep an
    honest account of what is still exact.
    """

    __slots__ = ("val", "g", "h", "c", "m", "order")

    # make numpy defer to our reflected operators instead of broadcasting
    __array_ufunc__ = None

    def __init__(self, val, g=None, h=None, c=None, m=None, order=None):
        self.val = np.asarray(val, dtype=float)
        self.g = g
        self.h = h
        self.c = c
        if m is None:
            if g is None:
                raise ValueError("need m for a derivative-free jet")
            m = g.shape[-1]
        self.m = m
        if order is None:
            order = 0 if g is None else (1 if h is None else (2 if c is None else 3))
        self.order = order

    # -- construction -----------------------------------------------------

    @staticmethod
    def const(value, m: int, order: int = 3) -> "Jet":
        value = np.asarray(value, dtype=float)
        g = np.zeros(value.shape + (m,))
        h = np.zeros(value.shape + (m, m)) if order >= 2 else None
        c = np.zeros(value.shape + (m, m, m)) if order >= 3 else None
        return Jet(value, g if order >= 1 else None, h, c, m=m, order=order)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.const(other, self.m, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        k = min(self.order, o.order)
        return Jet(self.val + o.val,
                   self.g + o.g if k >= 1 else None,
                   self.h + o.h if k >= 2 else None,
                   self.c + o.c if k >= 3 else None,
                   m=self.m, order=k)

    __radd__ = __add__

    def __neg__(self):
        k = self.order
        return Jet(-self.val,
                   -self.g if k >= 1 else None,
                   -self.h if k >= 2 else None,
                   -self.c if k >= 3 else None,
                   m=self.m, order=k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        k = min(self.order, o.order)
        a, b = self, o
        val = a.val * b.val
        g = h = c = None
        if k >= 1:
            g = a.g * b.val[..., None] + b.g * a.val[..., None]
        if k >= 2:
            h = (a.h * b.val[..., None, None] + b.h * a.val[..., None, None]
                 + np.einsum("...i,...j->...ij", a.g, b.g)
                 + np.einsum("...i,...j->...ij", b.g, a.g))
        if k >= 3:
            c = (a.c * b.val[..., None, None, None]
                 + b.c * a.val[..., None, None, None]
                 + _sym3(a.h, b.g) + _sym3(b.h, a.g))
        return Jet(val, g, h, c, m=self.m, order=k)

    __rmul__ = __mul__

    def compose(self, u0, u1, u2=None, u3=None) -> "Jet":
        """Chain rule for a univariate map u applied to this jet.

        u0..u3 are the derivatives of u evaluated at ``self.val``.
        """
        k = self.order
        g = h = c = None
        if k >= 1:
            g = u1[..., None] * self.g
        if k >= 2:
            gg = np.einsum("...i,...j->...ij", self.g, self.g)
            h = u1[..., None, None] * self.h + u2[..., None, None] * gg
        if k >= 3:
            ggg = np.einsum("...i,...j,...k->...ijk", self.g, self.g, self.g)
            c = (u1[..., None, None, None] * self.c
                 + u2[..., None, None, None] * _sym3(self.h, self.g)
                 + u3[..., None, None, None] * ggg)
        return Jet(u0, g, h, c, m=self.m, order=k)

    def reciprocal(self) -> "Jet":
        v = self.val
        return self.compose(1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            if p == 0:
                return Jet.const(np.ones_like(self.val), self.m, self.order)
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        v = self.val
        return self.compose(v**p, p * v**(p - 1), p * (p - 1) * v**(p - 2),
                            p * (p - 1) * (p - 2) * v**(p - 3))

    # -- derivative extraction --------------------------------------------

    def partial(self, mu: int) -> "Jet":
        """The jet of the partial derivative with respect to variable mu.

        Costs one derivative order.
        """
        if self.order < 1:
            raise ValueError("jet order exhausted; cannot take another derivative")
        g = self.h[..., mu, :] if self.order >= 2 else None
        h = self.c[..., mu, :, :] if self.order >= 3 else None
        return Jet(self.g[..., mu], g, h, None, m=self.m, order=self.order - 1)


def variables(pts: np.ndarray, order: int = 3) -> list[Jet]:
    """Seed jets for the m coordinates of a batch of points, shape (..., m)."""
    pts = np.asarray(pts, dtype=float)
    m = pts.shape[-1]
    eye = np.eye(m)
    out = []
    for mu in range(m):
        g = np.broadcast_to(eye[mu], pts.shape[:-1] + (m,)).copy()
        h = np.zeros(pts.shape[:-1] + (m, m)) if order >= 2 else None
        c = np.zeros(pts.shape[:-1] + (m, m, m)) if order >= 3 else None
        out.append(Jet(pts[..., mu], g if order >= 1 else None, h, c,
                       m=m, order=order))
    return out


def constant(value, m: int, order: int = 3) -> Jet:
    return Jet.const(value, m, order)


def sin(j: Jet) -> Jet:
    s, co = np.sin(j.val), np.cos(j.val)
    return j.compose(s, co, -s, -co)


def cos(j: Jet) -> Jet:
    s, co = np.sin(j.val), np.cos(j.val)
    return j.compose(co, -s, -co, s)


def exp(j: Jet) -> Jet:
    e = np.exp(j.val)
    return j.compose(e, e, e, e)


def log(j: Jet) -> Jet:
    v = j.val
    return j.compose(np.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)


def sqrt(j: Jet) -> Jet:
    r = np.sqrt(j.val)
    return j.compose(r, 0.5 / r, -0.25 / r**3, 0.375 / r**5)


def sinh(j: Jet) -> Jet:
    s, c = np.sinh(j.val), np.cosh(j.val)
    return j.compose(s, c, s, c)


def cosh(j: Jet) -> Jet:
    s, c = np.sinh(j.val), np.cosh(j.val)
    return j.compose(c, s, c, s)


def tanh(j: Jet) -> Jet:
    t = np.tanh(j.val)
    sech2 = 1.0 - t * t
    return j.compose(t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0))
