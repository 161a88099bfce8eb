"""Combinatorics of the flow-invariant cell decomposition and of the toral CW
complexes built over sphere cells.

Index conventions: pair indices are 1-based as in the mathematical notation;
``KPermutation.sigma`` lists the k selected pairs first (increasing), then the
discarded ones (increasing).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError

ZERO_PAIR_REL = 1e-9


@dataclass(frozen=True, order=True)
class KPermutation:
    n: int
    k: int
    sigma: tuple

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise InputError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        if sorted(self.sigma) != list(range(1, self.n + 1)):
            raise InputError(f"{self.sigma} is not a permutation of 1..{self.n}")
        sel, rest = self.sigma[: self.k], self.sigma[self.k:]
        if list(sel) != sorted(sel) or list(rest) != sorted(rest):
            raise InputError(f"{self.sigma} is not in canonical S^k_n form")

    @classmethod
    def from_selected(cls, n: int, selected) -> "KPermutation":
        sel = sorted(set(int(i) for i in selected))
        if any(not 1 <= i <= n for i in sel):
            raise InputError(f"selected indices {sel} out of range 1..{n}")
        rest = [i for i in range(1, n + 1) if i not in sel]
        return cls(n, len(sel), tuple(sel + rest))

    @classmethod
    def identity(cls, n: int, k: int) -> "KPermutation":
        return cls(n, k, tuple(range(1, n + 1)))

    @property
    def selected(self) -> tuple:
        return self.sigma[: self.k]

    @property
    def discarded(self) -> tuple:
        return self.sigma[self.k:]

    def __call__(self, i: int) -> int:
        """sigma(i) with 1-based argument."""
        return self.sigma[i - 1]

    def __str__(self):
        return "(" + ",".join(map(str, self.sigma)) + f")|k={self.k}"


def enumerate_Skn(n: int, k: int) -> list[KPermutation]:
    if k > n or k < 0:
        raise InputError(f"need 0 <= k <= n, got k={k}, n={n}")
    return [KPermutation.from_selected(n, c) for c in itertools.combinations(range(1, n + 1), k)]


def refinements(sigma: KPermutation, l: int) -> list[KPermutation]:
    """All gamma in S^l_n whose selected set lies inside sigma's selected set."""
    if l > sigma.k or l < 0:
        raise InputError(f"refinement level {l} exceeds k={sigma.k}")
    return [KPermutation.from_selected(sigma.n, c) for c in itertools.combinations(sigma.selected, l)]


@dataclass(frozen=True)
class CellPoint:
    k: int
    sigma: KPermutation | None
    C: tuple
    rho_k: float

    @property
    def is_origin(self) -> bool:
        return self.k == 0


def classify_point(x: Sequence[float], zero_rel: float = ZERO_PAIR_REL) -> CellPoint:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size % 2:
        raise InputError("state vector must have even length 2n")
    n = x.size // 2
    norms = np.hypot(x[0::2], x[1::2])
    total = float(np.linalg.norm(x))
    if total == 0.0:
        return CellPoint(0, KPermutation.identity(n, 0), (0.0,) * n, 0.0)
    sel = [i + 1 for i in range(n) if norms[i] >= zero_rel * total]
    sigma = KPermutation.from_selected(n, sel)
    C = np.zeros(n)
    idx = np.array(sel) - 1
    C[idx] = norms[idx] / np.linalg.norm(norms[idx])
    return CellPoint(len(sel), sigma, tuple(float(c) for c in C), float(norms[sigma.selected[-1] - 1]))


@dataclass(frozen=True)
class SphereCell:
    """Open cell S^{l-1,gamma}_{>0} of the positive unit sphere; dimension l-1."""

    l: int
    gamma: KPermutation

    def __post_init__(self):
        if self.l < 1 or self.gamma.k != self.l:
            raise InputError("SphereCell needs l >= 1 and gamma.k == l")

    @property
    def dim(self) -> int:
        return self.l - 1

    @property
    def indices(self) -> tuple:
        return self.gamma.selected

    def contains(self, C, tol: float = 1e-12) -> bool:
        C = np.asarray(C, dtype=float)
        sel = np.zeros(C.size, dtype=bool)
        sel[np.array(self.indices) - 1] = True
        return bool(np.all(C[sel] > 0) and np.all(np.abs(C[~sel]) <= tol)
                    and abs(np.sum(C ** 2) - 1) <= 1e-9)


def sphere_cell_closure(cell: SphereCell) -> list[SphereCell]:
    """All open cells in the closure, largest first; 2^l - 1 of them."""
    out = []
    for i in range(cell.l, 0, -1):
        for g in refinements(cell.gamma, i):
            out.append(SphereCell(i, g))
    return out


@dataclass(frozen=True)
class ToralCell:
    base: SphereCell | str
    fiber_dim: int
    radius_map_id: str = ""
    base_dim: int | None = None

    def __post_init__(self):
        if self.base_dim is None:
            if not isinstance(self.base, SphereCell):
                raise InputError("region-tagged cells need an explicit base_dim")
            object.__setattr__(self, "base_dim", self.base.dim)

    @property
    def dim(self) -> int:
        return self.base_dim + self.fiber_dim


@dataclass(frozen=True)
class ToralCWDescriptor:
    cells: tuple
    label: str = ""
    stable: bool | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.cells)

    def fiber_histogram(self) -> dict:
        hist: dict = {}
        for c in self.cells:
            hist[c.fiber_dim] = hist.get(c.fiber_dim, 0) + 1
        return dict(sorted(hist.items()))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "stable": self.stable,
            "cells": [
                {
                    "base": (list(c.base.indices) if isinstance(c.base, SphereCell) else c.base),
                    "base_dim": c.base_dim,
                    "fiber_dim": c.fiber_dim,
                    "radius_map_id": c.radius_map_id,
                }
                for c in self.cells
            ],
        }


def toral_cw_over_sphere(sigma: KPermutation, radius_map_id: str = "leaf-radius") -> ToralCWDescriptor:
    """Toral cells T_{l+1} x S^{l,gamma}_{>0}, gamma in S^{l+1,sigma}_n, 0 <= l <= k-1."""
    if sigma.k < 1:
        raise InputError("toral complex needs k >= 1")
    cells = []
    for l in range(sigma.k - 1, -1, -1):
        for g in refinements(sigma, l + 1):
            cells.append(ToralCell(SphereCell(l + 1, g), l + 1, radius_map_id))
    for c in cells:
        # fiber T_{l+1} over an l-cell: no even dimensional toral cell
        assert c.fiber_dim == c.base_dim + 1 and c.dim % 2 == 1
    return ToralCWDescriptor(tuple(cells), label=f"toral complex over {sigma}")


def expected_toral_cell_count(k: int) -> int:
    return sum(math.comb(k, l) for l in range(1, k + 1))


def cell_lattice(n: int, k_max: int | None = None) -> list[dict]:
    """Flow-invariant cells M_{k,sigma} with their codimension-one boundary cells."""
    k_max = n if k_max is None else k_max
    out = []
    for k in range(0, k_max + 1):
        for s in enumerate_Skn(n, k):
            faces = [list(g.selected) for g in refinements(s, k - 1)] if k > 0 else []
            out.append({"k": k, "selected": list(s.selected), "sigma": list(s.sigma),
                        "dim": 2 * k, "boundary": faces})
    return out
