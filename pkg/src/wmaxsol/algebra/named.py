"""The homogeneous operations: discriminator, dual discriminator, switching,
near projections, ``r_n``, ``d_n`` and ``x+y+z`` on the 4-element group of
exponent 2."""
from __future__ import annotations

from ..core import Domain, Operation
from ..errors import InvalidArgument


def discriminator(D: Domain) -> Operation:
    return Operation.from_function(D, 3, lambda a, b, c: c if a == b else a, name="t")


def dual_discriminator(D: Domain) -> Operation:
    return Operation.from_function(D, 3, lambda a, b, c: a if a == b else c, name="d")


def switching(D: Domain) -> Operation:
    def s(a, b, c):
        if a == b:
            return c
        if a == c:
            return b
        return a

    return Operation.from_function(D, 3, s, name="s")


def near_projection(D: Domain, k: int) -> Operation:
    n = D.size
    if not 3 <= k <= n:
        raise InvalidArgument(f"l_k needs 3 <= k <= |D| = {n}, got k={k}")
    return Operation.from_function(D, k, lambda *a: a[0] if len(set(a)) < k else a[-1], name=f"l{k}")


def _missing(D: Domain, args) -> int:
    (rest,) = set(D.elements) - set(args)
    return rest


def r_op(D: Domain) -> Operation:
    """The (n-1)-ary ``r_n``: first argument unless all distinct, else the missing element."""
    n = D.size
    if n < 2:
        raise InvalidArgument("r_n needs |D| >= 2")

    def r(*a):
        return a[0] if len(set(a)) < n - 1 else _missing(D, a)

    return Operation.from_function(D, n - 1, r, name=f"r{n}")


def d_op(D: Domain) -> Operation:
    """The (n-1)-ary ``d_n`` (n >= 4)."""
    n = D.size
    if n < 4:
        raise InvalidArgument("d_n needs |D| >= 4")

    def dn(*a):
        if len(set(a)) < n - 1:
            return a[0] if a[0] == a[1] else a[2]
        return _missing(D, a)

    return Operation.from_function(D, n - 1, dn, name=f"d{n}")


def exponent2_sum(D: Domain) -> Operation:
    """``x+y+z`` in the group of exponent 2 on 4 elements.

    The result does not depend on how D is labelled by the group: all equal
    arguments give that element, a repeated pair cancels, three distinct
    arguments give the fourth element.
    """
    if D.size != 4:
        raise InvalidArgument("x+y+z over an exponent-2 group needs |D| = 4")

    def f(x, y, z):
        if x == y:
            return z
        if x == z:
            return y
        if y == z:
            return x
        return _missing(D, (x, y, z))

    return Operation.from_function(D, 3, f, name="xyz")


def named_op(D: Domain, name: str) -> Operation:
    """Look up one catalog operation by name (``t``, ``d``, ``s``, ``l3``, ``r4``...)."""
    n = D.size
    if n < 2:
        raise InvalidArgument("named operations need |D| >= 2")
    if name == "t":
        return discriminator(D)
    if name == "d":
        return dual_discriminator(D)
    if name == "s":
        return switching(D)
    if name == "xyz":
        return exponent2_sum(D)
    if name.startswith("l") and name[1:].isdigit():
        return near_projection(D, int(name[1:]))
    if name.startswith("r") and name[1:].isdigit():
        if int(name[1:]) != n:
            raise InvalidArgument(f"r_k is only defined for k = |D| = {n}")
        return r_op(D)
    if name.startswith("d") and name[1:].isdigit():
        if int(name[1:]) != n:
            raise InvalidArgument(f"d_k is only defined for k = |D| = {n}")
        return d_op(D)
    raise InvalidArgument(f"unknown operation {name!r}")


def named_ops(D: Domain) -> dict[str, Operation]:
    """Every catalog operation defined for this domain size."""
    n = D.size
    if n < 2:
        raise InvalidArgument("named operations need |D| >= 2")
    ops = {"t": discriminator(D), "d": dual_discriminator(D), "s": switching(D)}
    for k in range(3, n + 1):
        ops[f"l{k}"] = near_projection(D, k)
    ops[f"r{n}"] = r_op(D)
    if n >= 4:
        ops[f"d{n}"] = d_op(D)
    if n == 4:
        ops["xyz"] = exponent2_sum(D)
    return ops
