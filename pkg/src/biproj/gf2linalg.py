"""Small GF(2) linear algebra on int bitsets.

A vector is a Python int whose bit ``i`` is coordinate ``i``.  A linear map
is given by its column images: ``columns[i]`` is the image of basis vector
``e_i``.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of a collection of bit vectors."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = v
                break
            v ^= b
    return len(basis)


def span(vectors: Iterable[int]) -> list[int]:
    """All elements of the GF(2) span of ``vectors`` (sorted)."""
    out = [0]
    for v in echelon(vectors):
        out += [w ^ v for w in out]
    return sorted(out)


def echelon(vectors: Iterable[int]) -> list[int]:
    """Fully reduced echelon basis, sorted by leading bit (descending)."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = v
                break
            v ^= b
    keys = sorted(basis, reverse=True)
    for i, h in enumerate(keys):
        for h2 in keys[:i]:
            if (basis[h2] >> h) & 1:
                basis[h2] ^= basis[h]
    return [basis[h] for h in keys]


class LinearMap:
    """A GF(2)-linear map ``GF(2)^n -> GF(2)^m`` stored by column images.

    Construction runs one elimination pass; afterwards ``solve`` costs
    O(rank) word operations and the kernel basis is available directly.
    """

    __slots__ = ("columns", "n", "_basis", "kernel_basis")

    def __init__(self, columns: Sequence[int]):
        self.columns = tuple(columns)
        self.n = len(self.columns)
        basis: dict[int, tuple[int, int]] = {}
        kernel = []
        for i, c in enumerate(self.columns):
            v, combo = c, 1 << i
            while v:
                h = v.bit_length() - 1
                b = basis.get(h)
                if b is None:
                    basis[h] = (v, combo)
                    break
                v ^= b[0]
                combo ^= b[1]
            else:
                kernel.append(combo)
        self._basis = basis
        self.kernel_basis = tuple(kernel)

    @property
    def rank(self) -> int:
        return len(self._basis)

    def __call__(self, x: int) -> int:
        out = 0
        i = 0
        while x:
            if x & 1:
                out ^= self.columns[i]
            x >>= 1
            i += 1
        return out

    def solve(self, target: int) -> int | None:
        """Some ``x`` with ``self(x) == target``, or None if target is not in the image."""
        v, combo = target, 0
        while v:
            h = v.bit_length() - 1
            b = self._basis.get(h)
            if b is None:
                return None
            v ^= b[0]
            combo ^= b[1]
        return combo

    def kernel(self) -> list[int]:
        return span(self.kernel_basis)
