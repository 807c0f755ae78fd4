from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp


@lru_cache(maxsize=64)
def sector_states(n_sites: int, n: int) -> np.ndarray:
    """Occupation bitstrings with n set bits, ascending; bit i is site i"""
    states = [sum(1 << i for i in occ) for occ in combinations(range(n_sites), n)]
    return np.array(sorted(states), dtype=np.int64)


def popcount_below(state: int, site: int) -> int:
    return bin(state & ((1 << site) - 1)).count("1")


def annihilate(state: int, site: int) -> Optional[Tuple[int, int]]:
    """c_site |state> as (sign, new_state), None if the site is empty"""
    if not (state >> site) & 1:
        return None
    sign = -1 if popcount_below(state, site) % 2 else 1
    return sign, state ^ (1 << site)


def create(state: int, site: int) -> Optional[Tuple[int, int]]:
    if (state >> site) & 1:
        return None
    sign = -1 if popcount_below(state, site) % 2 else 1
    return sign, state | (1 << site)


@dataclass(frozen=True)
class ManyBodyBasis:
    """Fixed-n fermion sector tensored with all nuclear-spin configurations.

    Index = fermion_index * spin_dim**N + spin_index. Spin configurations are
    base-(2S+1) digits with site 0 most significant; digit k means m = S - k.
    """
    n_sites: int
    spin_dim: int
    n: int

    @property
    def fermion_states(self) -> np.ndarray:
        return sector_states(self.n_sites, self.n)

    @property
    def fermion_dim(self) -> int:
        return comb(self.n_sites, self.n)

    @property
    def spin_space_dim(self) -> int:
        return self.spin_dim ** self.n_sites

    @property
    def dim(self) -> int:
        return self.fermion_dim * self.spin_space_dim

    def index(self, bitstring: int, spin_config: Tuple[int, ...]) -> int:
        f = int(np.searchsorted(self.fermion_states, bitstring))
        if f >= self.fermion_dim or self.fermion_states[f] != bitstring:
            raise KeyError(f"bitstring {bitstring:b} not in sector n={self.n}")
        s = 0
        for digit in spin_config:
            s = s * self.spin_dim + digit
        return f * self.spin_space_dim + s

    def decode(self, index: int) -> Tuple[int, Tuple[int, ...]]:
        f, s = divmod(index, self.spin_space_dim)
        digits: List[int] = []
        for _ in range(self.n_sites):
            s, d = divmod(s, self.spin_dim)
            digits.append(d)
        return int(self.fermion_states[f]), tuple(reversed(digits))


def spin_operators(S: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(I^x, I^y, I^z) in the basis m = S, S-1, ..., -S"""
    m = S - np.arange(int(round(2 * S)) + 1)
    Iz = np.diag(m)
    # <m+1| I+ |m> = sqrt(S(S+1) - m(m+1))
    raise_amp = np.sqrt(S * (S + 1) - m[1:] * (m[1:] + 1))
    Ip = np.diag(raise_amp, k=1)
    Im = Ip.T
    Ix = 0.5 * (Ip + Im)
    Iy = -0.5j * (Ip - Im)
    return Ix, Iy, Iz


def embed_site(op: np.ndarray, site: int, n_sites: int) -> sp.csr_matrix:
    d = op.shape[0]
    left = sp.identity(d ** site, format="csr")
    right = sp.identity(d ** (n_sites - site - 1), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def fermion_hopping_matrix(n_sites: int, n: int, i: int, j: int) -> sp.csr_matrix:
    """c_i† c_j restricted to the n-particle sector"""
    states = sector_states(n_sites, n)
    rows, cols, vals = [], [], []
    for col, state in enumerate(states):
        out = annihilate(int(state), j)
        if out is None:
            continue
        s1, mid = out
        out = create(mid, i)
        if out is None:
            continue
        s2, new = out
        rows.append(int(np.searchsorted(states, new)))
        cols.append(col)
        vals.append(s1 * s2)
    dim = len(states)
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=float)


def fermion_creation_matrix(n_sites: int, n: int, i: int) -> sp.csr_matrix:
    """c_i† mapping the (n-1)-sector onto the n-sector"""
    lower = sector_states(n_sites, n - 1)
    upper = sector_states(n_sites, n)
    rows, cols, vals = [], [], []
    for col, state in enumerate(lower):
        out = create(int(state), i)
        if out is None:
            continue
        sign, new = out
        rows.append(int(np.searchsorted(upper, new)))
        cols.append(col)
        vals.append(sign)
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(upper), len(lower)), dtype=float)


def occupation_diagonal(n_sites: int, n: int, i: int) -> np.ndarray:
    return ((sector_states(n_sites, n) >> i) & 1).astype(float)


def fermion_operators(n_sites: int) -> List[sp.csr_matrix]:
    """Annihilation operators c_i on the full 2^N Fock space (integer-ordered basis)"""
    dim = 1 << n_sites
    ops = []
    for i in range(n_sites):
        rows, cols, vals = [], [], []
        for state in range(dim):
            out = annihilate(state, i)
            if out is None:
                continue
            sign, new = out
            rows.append(new)
            cols.append(state)
            vals.append(sign)
        ops.append(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=float))
    return ops
