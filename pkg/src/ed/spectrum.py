import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from loguru import logger

from ..errors import MissingMatrixElements, SpectrumError
from ..lattice import LatticeGraph
from ..model import ModelParams, PinningPattern
from .basis import fermion_creation_matrix
from .hamiltonian import DEFAULT_DIMENSION_CAP, build_sector_hamiltonian

DENSE_CUTOFF = 4000
LANCZOS_RESIDUAL = 1e-10


def degeneracy_tolerance(energy: float) -> float:
    return 1e-9 * max(1.0, abs(energy))


@dataclass
class ManyBodySpectrum:
    """Sector-resolved eigenpairs plus edge creation amplitudes.

    ``creation[(i, n)][α, α']`` = <Ψ_α^(n)| c_i† |Ψ_α'^(n-1)>. Energies
    include the uniform chemical potential ``mu_ref`` they were built with.
    """
    n_sites: int
    S: float
    mu_ref: float
    energies: Dict[int, np.ndarray]
    vectors: Dict[int, np.ndarray]
    complete: Dict[int, bool] = field(default_factory=dict)
    creation: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.S)) + 1

    @property
    def sectors(self) -> List[int]:
        return sorted(self.energies)

    def bare_energies(self, n: int) -> np.ndarray:
        return self.energies[n] + self.mu_ref * n

    def grand_energies(self, n: int, mu: Optional[float] = None) -> np.ndarray:
        mu = self.mu_ref if mu is None else mu
        return self.bare_energies(n) - mu * n

    def creation_elements(self, site: int, n: int) -> np.ndarray:
        try:
            return self.creation[(site, n)]
        except KeyError:
            raise MissingMatrixElements(f"no creation elements for site {site}, sector {n}") from None


@dataclass
class GroundState:
    energy: float
    states: List[Tuple[int, int]]
    degenerate: bool

    def vectors(self, spectrum: ManyBodySpectrum) -> List[Tuple[int, np.ndarray]]:
        return [(n, spectrum.vectors[n][:, a]) for n, a in self.states]


def _diagonalize_sector(
    graph: LatticeGraph, p: ModelParams, n: int, pinning, cap: int, dense_cutoff: int, n_eigs: int
) -> Tuple[int, np.ndarray, np.ndarray, bool]:
    H = build_sector_hamiltonian(graph, p, n, pinning, cap)
    dim = H.shape[0]
    if dim <= dense_cutoff:
        E, X = scipy.linalg.eigh(H.toarray())
        return n, E, X, True
    k = min(n_eigs, dim - 2)
    E, X = spla.eigsh(H, k=k, which="SA", tol=1e-12)
    order = np.argsort(E)
    E, X = E[order], X[:, order]
    residual = np.abs(H @ X - X * E).max()
    if residual > LANCZOS_RESIDUAL * max(1.0, np.abs(E).max()):
        logger.warning(f"Lanczos residual {residual:.2e} in sector n={n}")
    return n, E, X, False


def diagonalize(
    graph: LatticeGraph,
    p: ModelParams,
    pinning: Optional[PinningPattern] = None,
    sectors: Optional[Iterable[int]] = None,
    edge_sites: Sequence[int] = (),
    cap: int = DEFAULT_DIMENSION_CAP,
    dense_cutoff: int = DENSE_CUTOFF,
    n_eigs: int = 6,
    workers: Optional[int] = None,
) -> ManyBodySpectrum:
    sectors = list(range(graph.n_sites + 1) if sectors is None else sectors)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(
            lambda n: _diagonalize_sector(graph, p, n, pinning, cap, dense_cutoff, n_eigs), sectors
        ))
    spectrum = ManyBodySpectrum(
        n_sites=graph.n_sites,
        S=p.S,
        mu_ref=p.mu if p.mu_site is None else 0.0,
        energies={n: E for n, E, _, _ in results},
        vectors={n: X for n, _, X, _ in results},
        complete={n: full for n, _, _, full in results},
    )
    spin_eye = sp.identity(spectrum.spin_dim ** graph.n_sites, format="csr")
    for site in edge_sites:
        for n in sectors:
            if n - 1 not in spectrum.vectors:
                continue
            C = sp.kron(fermion_creation_matrix(graph.n_sites, n, site), spin_eye, format="csr")
            spectrum.creation[(site, n)] = spectrum.vectors[n].conj().T @ (C @ spectrum.vectors[n - 1])
    partial = [n for n, full in spectrum.complete.items() if not full]
    if partial:
        logger.warning(f"Sectors {partial} hold only the lowest eigenpairs; thermal sums are truncated")
    logger.info(f"Diagonalized {len(sectors)} sectors on N={graph.n_sites} sites")
    return spectrum


def ground_state(spectrum: ManyBodySpectrum, n: Optional[int] = None, mu: Optional[float] = None) -> GroundState:
    """Lowest level of sector n, or of the grand-canonical union when n is None"""
    sectors = [n] if n is not None else spectrum.sectors
    levels = [(float(E), m, a) for m in sectors for a, E in enumerate(spectrum.grand_energies(m, mu))]
    e0 = min(E for E, _, _ in levels)
    tol = degeneracy_tolerance(e0)
    states = [(m, a) for E, m, a in levels if E - e0 <= tol]
    if len(states) > 1:
        logger.debug(f"Ground level E0={e0:.6g} is {len(states)}-fold degenerate")
    return GroundState(energy=e0, states=states, degenerate=len(states) > 1)


def save_spectrum(spectrum: ManyBodySpectrum, path: Union[str, Path]) -> Path:
    """Binary ``.npz`` dump plus a JSON header next to it"""
    path = Path(path).with_suffix(".npz")
    arrays = {}
    for n in spectrum.sectors:
        arrays[f"E_{n}"] = spectrum.energies[n]
        arrays[f"X_{n}"] = spectrum.vectors[n]
    for (site, n), M in spectrum.creation.items():
        arrays[f"M_{site}_{n}"] = M
    header = {
        "n_sites": spectrum.n_sites,
        "S": spectrum.S,
        "mu_ref": spectrum.mu_ref,
        "sectors": spectrum.sectors,
        "complete": {str(n): v for n, v in spectrum.complete.items()},
        "creation_keys": [list(k) for k in spectrum.creation],
        "sector_energies": {str(n): spectrum.energies[n].tolist() for n in spectrum.sectors},
    }
    np.savez_compressed(path, **arrays)
    path.with_suffix(".json").write_text(json.dumps(header, indent=2))
    return path


def load_spectrum(path: Union[str, Path]) -> ManyBodySpectrum:
    path = Path(path).with_suffix(".npz")
    header = json.loads(path.with_suffix(".json").read_text())
    with np.load(path) as data:
        sectors = header["sectors"]
        return ManyBodySpectrum(
            n_sites=header["n_sites"],
            S=header["S"],
            mu_ref=header["mu_ref"],
            energies={n: data[f"E_{n}"] for n in sectors},
            vectors={n: data[f"X_{n}"] for n in sectors},
            complete={int(n): v for n, v in header["complete"].items()},
            creation={(s, n): data[f"M_{s}_{n}"] for s, n in header["creation_keys"]},
        )


def addition_energies(spectrum: ManyBodySpectrum) -> Dict[int, float]:
    """E_0^(n) - E_0^(n-1) from bare (μ-free) ground energies"""
    out = {}
    for n in spectrum.sectors:
        if n - 1 in spectrum.energies:
            out[n] = float(spectrum.bare_energies(n).min() - spectrum.bare_energies(n - 1).min())
    if not out:
        raise SpectrumError("need at least two adjacent sectors")
    return out
