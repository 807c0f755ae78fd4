from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, List, Tuple

import numpy as np
from loguru import logger

from ..errors import LatticeError


class Geometry(str, Enum):
    CHAIN = "chain"
    SQUARE = "square"
    HONEYCOMB = "honeycomb"


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


SUBLATTICE_A = 1
SUBLATTICE_B = -1


@dataclass(frozen=True)
class LatticeGraph:
    """Dopant array: site positions (nm), Néel parity and bonds.

    ``sublattice[i]`` is the parity δ_i = +1 (A) or -1 (B). ``supercell`` holds
    the periodic translation vectors (empty under open boundary).
    ``seam_pairs`` lists wrap-around bonds joining equal-parity sites, which
    only odd periodic chains have.
    """
    geometry: Geometry
    dimension: int
    n_sites: int
    positions: np.ndarray
    sublattice: np.ndarray
    neighbor_pairs: List[Tuple[int, int]]
    boundary: Boundary
    lattice_constant: float
    shape: Tuple[int, int]
    supercell: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    seam_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def is_bipartite(self) -> bool:
        return not self.seam_pairs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_sites, dtype=int)
        for i, j in self.neighbor_pairs:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n_sites, self.n_sites))
        for i, j in self.neighbor_pairs:
            adj[i, j] = adj[j, i] = 1.0
        return adj

    def reference_site(self) -> int:
        """First A-sublattice site; origin for two-point correlators"""
        return int(np.flatnonzero(self.sublattice == SUBLATTICE_A)[0])

    def columns(self) -> Tuple[List[int], List[int]]:
        """Sites in the leftmost and rightmost x-columns"""
        x = self.positions[:, 0]
        tol = 1e-6 * self.lattice_constant
        left = [int(i) for i in np.flatnonzero(x <= x.min() + tol)]
        right = [int(i) for i in np.flatnonzero(x >= x.max() - tol)]
        return left, right

    def to_dict(self) -> Dict[str, Any]:
        return {
            "geometry": self.geometry.value,
            "dimension": self.dimension,
            "n_sites": self.n_sites,
            "shape": list(self.shape),
            "lattice_constant_nm": self.lattice_constant,
            "boundary": self.boundary.value,
            "positions_nm": self.positions.tolist(),
            "sublattice": self.sublattice.tolist(),
            "neighbor_pairs": [list(p) for p in self.neighbor_pairs],
            "seam_pairs": [list(p) for p in self.seam_pairs],
            "supercell_nm": self.supercell.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LatticeGraph":
        supercell = np.asarray(data.get("supercell_nm", []), dtype=float).reshape(-1, 2)
        return cls(
            geometry=Geometry(data["geometry"]),
            dimension=int(data["dimension"]),
            n_sites=int(data["n_sites"]),
            positions=np.asarray(data["positions_nm"], dtype=float),
            sublattice=np.asarray(data["sublattice"], dtype=int),
            neighbor_pairs=[tuple(p) for p in data["neighbor_pairs"]],
            boundary=Boundary(data["boundary"]),
            lattice_constant=float(data["lattice_constant_nm"]),
            shape=tuple(data["shape"]),
            supercell=supercell,
            seam_pairs=[tuple(p) for p in data.get("seam_pairs", [])],
        )


def honeycomb_basis(a: float) -> Tuple[np.ndarray, np.ndarray]:
    a1 = 0.5 * a * np.array([3.0, np.sqrt(3.0)])
    a2 = 0.5 * a * np.array([3.0, -np.sqrt(3.0)])
    return a1, a2


def _add_pair(pairs: List[Tuple[int, int]], i: int, j: int) -> None:
    pair = (min(i, j), max(i, j))
    if i == j or pair in pairs:
        raise LatticeError(f"degenerate bond {pair}: lattice too small for its boundary")
    pairs.append(pair)


def _build_chain(n_x: int, a: float, periodic: bool):
    if periodic and n_x < 3:
        raise LatticeError("periodic chain needs n_x >= 3")
    positions = np.column_stack([np.arange(n_x) * a, np.zeros(n_x)])
    sublattice = np.where(np.arange(n_x) % 2 == 0, SUBLATTICE_A, SUBLATTICE_B)
    pairs: List[Tuple[int, int]] = []
    for i in range(n_x - 1):
        _add_pair(pairs, i, i + 1)
    seams: List[Tuple[int, int]] = []
    supercell = np.zeros((0, 2))
    if periodic:
        _add_pair(pairs, n_x - 1, 0)
        supercell = np.array([[n_x * a, 0.0]])
        if n_x % 2 == 1:
            seams.append((0, n_x - 1))
            logger.warning(f"Odd periodic chain (N={n_x}): bond (0, {n_x - 1}) joins equal-parity sites")
    return positions, sublattice, pairs, supercell, seams


def _build_square(n_x: int, n_y: int, a: float, periodic: bool):
    if n_y < 2:
        raise LatticeError("square geometry needs n_y >= 2; use the chain geometry for n_y = 1")
    if periodic and (n_x < 3 or n_y < 3 or n_x % 2 or n_y % 2):
        raise LatticeError("periodic square lattice needs even n_x, n_y >= 4 to stay bipartite")
    index = lambda x, y: y * n_x + x
    positions = np.array([[x * a, y * a] for y in range(n_y) for x in range(n_x)], dtype=float)
    sublattice = np.array(
        [SUBLATTICE_A if (x + y) % 2 == 0 else SUBLATTICE_B for y in range(n_y) for x in range(n_x)]
    )
    pairs: List[Tuple[int, int]] = []
    for y, x in product(range(n_y), range(n_x)):
        if x + 1 < n_x or periodic:
            _add_pair(pairs, index(x, y), index((x + 1) % n_x, y))
        if y + 1 < n_y or periodic:
            _add_pair(pairs, index(x, y), index(x, (y + 1) % n_y))
    supercell = np.array([[n_x * a, 0.0], [0.0, n_y * a]]) if periodic else np.zeros((0, 2))
    return positions, sublattice, pairs, supercell, []


def _build_honeycomb(n_x: int, n_y: int, a: float, periodic: bool):
    if periodic and (n_x < 2 or n_y < 2):
        raise LatticeError("periodic honeycomb needs n_x, n_y >= 2 unit cells")
    a1, a2 = honeycomb_basis(a)
    offset = np.array([a, 0.0])
    cell = lambda i, j: j * n_x + i
    positions = np.zeros((2 * n_x * n_y, 2))
    sublattice = np.zeros(2 * n_x * n_y, dtype=int)
    for j, i in product(range(n_y), range(n_x)):
        c = cell(i, j)
        r = i * a1 + j * a2
        positions[2 * c] = r
        positions[2 * c + 1] = r + offset
        sublattice[2 * c] = SUBLATTICE_A
        sublattice[2 * c + 1] = SUBLATTICE_B
    pairs: List[Tuple[int, int]] = []
    for j, i in product(range(n_y), range(n_x)):
        site_a = 2 * cell(i, j)
        # A(R) bonds to B(R), B(R - a1), B(R - a2)
        for di, dj in ((0, 0), (-1, 0), (0, -1)):
            ii, jj = i + di, j + dj
            if not periodic and (ii < 0 or jj < 0):
                continue
            _add_pair(pairs, site_a, 2 * cell(ii % n_x, jj % n_y) + 1)
    supercell = np.array([n_x * a1, n_y * a2]) if periodic else np.zeros((0, 2))
    return positions, sublattice, pairs, supercell, []


def build_lattice(
    geometry: Geometry,
    n_x: int,
    n_y: int = 1,
    a: float = 4.7,
    boundary: Boundary = Boundary.PERIODIC,
) -> LatticeGraph:
    """Build a chain, square or honeycomb dopant array.

    Square sites are indexed row-major. Honeycomb sites are indexed
    unit-cell-major with A before B; N = 2 * n_x * n_y.
    """
    geometry = Geometry(geometry)
    boundary = Boundary(boundary)
    if n_x < 2:
        raise LatticeError(f"n_x must be >= 2, got {n_x}")
    if n_y < 1:
        raise LatticeError(f"n_y must be >= 1, got {n_y}")
    if a <= 0:
        raise LatticeError(f"lattice constant must be positive, got {a}")
    periodic = boundary is Boundary.PERIODIC

    if geometry is Geometry.CHAIN:
        if n_y != 1:
            raise LatticeError("chain geometry is one-dimensional: n_y must be 1")
        built = _build_chain(n_x, a, periodic)
        dimension = 1
    elif geometry is Geometry.SQUARE:
        built = _build_square(n_x, n_y, a, periodic)
        dimension = 2
    elif geometry is Geometry.HONEYCOMB:
        built = _build_honeycomb(n_x, n_y, a, periodic)
        dimension = 2
    else:
        raise LatticeError(f"Unsupported geometry: {geometry}")

    positions, sublattice, pairs, supercell, seams = built
    graph = LatticeGraph(
        geometry=geometry,
        dimension=dimension,
        n_sites=len(positions),
        positions=positions,
        sublattice=sublattice,
        neighbor_pairs=sorted(pairs),
        boundary=boundary,
        lattice_constant=float(a),
        shape=(n_x, n_y),
        supercell=supercell,
        seam_pairs=seams,
    )
    if np.any(graph.degrees() == 0):
        raise LatticeError("lattice has isolated sites")
    logger.debug(f"Built {geometry.value} lattice: N={graph.n_sites}, {len(pairs)} bonds, {boundary.value}")
    return graph


def pair_distances(graph: LatticeGraph) -> np.ndarray:
    """All pair distances in nm, minimum image under periodic boundary"""
    diff = graph.positions[None, :, :] - graph.positions[:, None, :]
    if len(graph.supercell) == 0:
        return np.linalg.norm(diff, axis=-1)
    best = np.full(diff.shape[:2], np.inf)
    for coeffs in product((-1, 0, 1), repeat=len(graph.supercell)):
        shift = np.asarray(coeffs, dtype=float) @ graph.supercell
        best = np.minimum(best, np.linalg.norm(diff + shift, axis=-1))
    return best


def pair_distance(graph: LatticeGraph, i: int, j: int) -> float:
    diff = graph.positions[j] - graph.positions[i]
    if len(graph.supercell) == 0:
        return float(np.linalg.norm(diff))
    return float(min(
        np.linalg.norm(diff + np.asarray(coeffs, dtype=float) @ graph.supercell)
        for coeffs in product((-1, 0, 1), repeat=len(graph.supercell))
    ))
