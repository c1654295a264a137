"""Pure-Python term kernel.

A term mapping is a ``dict`` from monomial keys to nonzero ``int``
coefficients.  A monomial key is a pair ``(central, word)`` of tuples:
``central`` is the sorted multiset of central-variable ids (``c^2*d`` is
``(0, 0, 1)``) and ``word`` is the sequence of noncommuting generator ids.

Every function returns a fresh dict and never mutates its arguments.
``_ckernel.pyx`` implements the same four functions.
"""

BACKEND = "python"


def _merge(a, b):
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def add_terms(a, b, sign=1):
    """Return ``a + sign*b`` with zero coefficients dropped."""
    out = dict(a)
    for key, coeff in b.items():
        value = out.get(key, 0) + sign * coeff
        if value:
            out[key] = value
        else:
            out.pop(key, None)
    return out


def scale_terms(a, k):
    if not k:
        return {}
    return {key: k * coeff for key, coeff in a.items()}


def mul_terms(a, b):
    out = {}
    get = out.get
    for (ca, wa), x in a.items():
        for (cb, wb), y in b.items():
            key = (_merge(ca, cb), wa + wb)
            out[key] = get(key, 0) + x * y
    return {key: coeff for key, coeff in out.items() if coeff}


def sum_terms(parts):
    """Sum an iterable of term mappings in one pass."""
    out = {}
    get = out.get
    for part in parts:
        for key, coeff in part.items():
            out[key] = get(key, 0) + coeff
    return {key: coeff for key, coeff in out.items() if coeff}
