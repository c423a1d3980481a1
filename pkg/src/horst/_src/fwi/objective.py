"""
Least-squares misfit, source-signature estimation and the adjoint-state
gradient with respect to V0
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Tuple

# Third-party core
import numpy as np
import scipy.sparse as sp
from pathos.pools import ThreadPool

# Local
from ..discretize.grid import PmlConfig
from ..discretize.hicks import build_rhs, coupling_matrix
from ..discretize.operator import ImpedanceMatrix, assemble_operator
from ..discretize.stencil import StencilWeightTable
from ..logger import logger
from ..model.physics import DEFAULT_PPW_MIN, DEFAULT_REFERENCE_FREQUENCY
from ..model.vti_model import VtiModel
from ..solver.factorization import Factorization, factorize
from ..solver.front import DEFAULT_CLUSTER_SIZE
from ..solver.ordering import DEFAULT_LEAF_SIZE
from ..solver.solve import SolveOptions, SolveStats, solve
from ..solver.symbolic import SymbolicFactorization
from .dataset import Acquisition, FrequencyData

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


@dataclass(frozen=True)
class ModelingOptions:
    """Settings shared by forward modelling and the inversion

    Parameters
    ----------
    free_surface
        Dirichlet plane on top of the grid
    pml
        absorbing layer settings
    damping
        imaginary part of the angular frequency, 1/s
    mode, eps_blr, precision
        factorization settings
    solve
        multi-RHS solve settings
    threads
        worker threads of the factorization
    deterministic
        force serial schedules
    f_ref
        reference frequency of the attenuation model, Hz
    weights
        stencil weight table, the optimized table when None
    """
    free_surface: bool = True
    pml: PmlConfig = field(default_factory=PmlConfig)
    damping: float = 0.0
    mode: str = 'FR'
    eps_blr: float = 1e-5
    precision: str = 'double'
    solve: SolveOptions = field(default_factory=SolveOptions)
    threads: int = 1
    deterministic: bool = False
    leaf_size: int = DEFAULT_LEAF_SIZE
    cluster_size: int = DEFAULT_CLUSTER_SIZE
    ppw_min: float = DEFAULT_PPW_MIN
    f_ref: float = DEFAULT_REFERENCE_FREQUENCY
    weights: Optional[StencilWeightTable] = None

    def __post_init__(self):
        if self.damping < 0.0:
            raise ValueError(f"damping must be >= 0, got {self.damping}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")

    def omega(self, frequency: float) -> complex:
        """Complex angular frequency 2 pi f + i damping"""
        return complex(2.0 * np.pi * frequency, self.damping)

    def solve_options(self) -> SolveOptions:
        return replace(self.solve, threads=self.threads,
                       deterministic=self.deterministic)

#                                                             Misfit and source
# =============================================================================


def _live(mask: Optional[np.ndarray], shape) -> np.ndarray:
    if mask is None:
        return np.ones(shape, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != shape:
        raise ValueError(
            f"Mask of shape {mask.shape} does not match the gathers {shape}")
    return mask


def misfit(d_obs: np.ndarray, d_sim: np.ndarray,
           mask: Optional[np.ndarray] = None) -> float:
    """Half the squared norm of the residual over the live traces

    Parameters
    ----------
    d_obs, d_sim
        observed and simulated gathers of identical shape
    mask, optional
        live traces, all live by default

    Returns
    -------
    float
        misfit, >= 0

    Raises
    ------
    ValueError
        If the shapes differ
    """
    d_obs, d_sim = np.asarray(d_obs), np.asarray(d_sim)
    if d_obs.shape != d_sim.shape:
        raise ValueError(
            f"Observed gather has shape {d_obs.shape}, simulated gather "
            f"{d_sim.shape}")
    live = _live(mask, d_obs.shape)
    residual = (d_sim.astype(complex) - d_obs)[live]
    return 0.5 * float(np.sum(residual.real ** 2 + residual.imag ** 2))


def estimate_signature(d_obs: np.ndarray, d_unit: np.ndarray,
                       mask: Optional[np.ndarray] = None) -> np.ndarray:
    """Complex least-squares source scalar per source

    Parameters
    ----------
    d_obs
        observed traces, shape (n_rec,) or (n_src, n_rec)
    d_unit
        traces simulated with a unit signature, same shape
    mask, optional
        live traces

    Returns
    -------
    np.ndarray
        <d_unit, d_obs> / <d_unit, d_unit> per source; 0 for a source
        without live energy
    """
    d_obs, d_unit = np.asarray(d_obs), np.asarray(d_unit)
    if d_obs.shape != d_unit.shape:
        raise ValueError(
            f"Observed traces have shape {d_obs.shape}, simulated traces "
            f"{d_unit.shape}")
    single = d_obs.ndim == 1
    d_obs, d_unit = np.atleast_2d(d_obs), np.atleast_2d(d_unit)
    live = _live(None if mask is None else np.atleast_2d(mask), d_obs.shape)

    unit = np.where(live, d_unit, 0.0).astype(complex)
    numerator = np.sum(np.conj(unit) * d_obs, axis=1)
    denominator = np.sum(np.abs(unit) ** 2, axis=1)

    signatures = np.zeros(d_obs.shape[0], dtype=complex)
    alive = denominator > 0.0
    signatures[alive] = numerator[alive] / denominator[alive]
    if not np.all(alive):
        logger.debug(f"Sources {np.flatnonzero(~alive).tolist()} have no "
                     f"live traces and are excluded")
    return signatures[0] if single else signatures

#                                                                    Simulation
# =============================================================================


class Simulation(NamedTuple):
    """Wavefields for unit signatures and the data they produce"""
    operator: ImpedanceMatrix
    factorization: Factorization
    wavefields: np.ndarray
    d_unit: np.ndarray
    solve_stats: SolveStats


def simulate(m: VtiModel, frequency: float, acquisition: Acquisition,
             options: Optional[ModelingOptions] = None,
             weight_field: Optional[np.ndarray] = None,
             reference_velocity: Optional[float] = None,
             symbolic: Optional[SymbolicFactorization] = None
             ) -> Simulation:
    """Assemble, factorize and solve for every source with a unit signature

    Parameters
    ----------
    m
        subsurface model
    frequency
        Hz
    acquisition
        source and receiver positions
    options, optional
        modelling settings
    weight_field, reference_velocity, optional
        frozen stencil weights and absorbing-profile velocity
    symbolic, optional
        analysis of an earlier factorization on the same grid

    Returns
    -------
    Simulation
        ``d_unit`` has shape (n_src, n_rec)
    """
    options = options if options is not None else ModelingOptions()
    A = assemble_operator(
        m, options.omega(frequency), weights=options.weights,
        pml=options.pml, free_surface=options.free_surface,
        weight_field=weight_field, reference_velocity=reference_velocity,
        ppw_min=options.ppw_min, f_ref=options.f_ref)

    fact = factorize(A, mode=options.mode, eps_blr=options.eps_blr,
                     precision=options.precision, threads=options.threads,
                     deterministic=options.deterministic,
                     leaf_size=options.leaf_size,
                     cluster_size=options.cluster_size, symbolic=symbolic)

    F = build_rhs(acquisition.sources, np.ones(acquisition.n_src), A.grid)
    P, stats = solve(fact, F, options.solve_options())
    P = P.astype(complex)
    d_unit = (coupling_matrix(acquisition.receivers, A.grid) @ P).T
    return Simulation(A, fact, P, d_unit, stats)

#                                                                      Gradient
# =============================================================================


def gradient(m: VtiModel, data: FrequencyData, acquisition: Acquisition,
             simulation: Simulation,
             signatures: Optional[np.ndarray] = None,
             options: Optional[ModelingOptions] = None) -> np.ndarray:
    """Adjoint-state gradient of the misfit with respect to V0

    The adjoint wavefields solve A mu = R^T conj(r) with the same factors as
    the forward problem, A being complex symmetric.

    Parameters
    ----------
    m
        model the simulation was run on
    data
        observed gather at the simulated frequency
    acquisition
        source and receiver positions
    simulation
        unit-signature wavefields and their factorization
    signatures, optional
        source signatures, by default those stored with the data
    options, optional
        modelling settings, for the solve

    Returns
    -------
    np.ndarray
        gradient, shape dims, zero in the water column

    Raises
    ------
    ValueError
        If the simulation has no factorization
    """
    if simulation is None or simulation.factorization is None:
        raise ValueError("The gradient needs the forward factorization")
    options = options if options is not None else ModelingOptions()
    signatures = data.signatures if signatures is None \
        else np.asarray(signatures, dtype=complex)

    A = simulation.operator
    d_sim = signatures[:, None] * simulation.d_unit
    residual = np.where(data.mask, d_sim - data.gather, 0.0)

    active = np.flatnonzero(np.any(residual != 0.0, axis=1)
                            & (signatures != 0.0))
    g = np.zeros(m.dims)
    if active.size == 0:
        return g

    R = coupling_matrix(acquisition.receivers, A.grid)
    adjoint_rhs = sp.csc_matrix(R.T @ np.conj(residual[active]).T)
    adjoint_rhs.eliminate_zeros()
    live = np.flatnonzero(np.diff(adjoint_rhs.indptr) > 0)
    active = active[live]
    mu, _ = solve(simulation.factorization, adjoint_rhs[:, live],
                  options.solve_options())
    mu = mu.astype(complex)

    def contribution(k: int) -> np.ndarray:
        s = active[k]
        return A.kappa_sensitivity(
            mu[:, k], signatures[s] * simulation.wavefields[:, s])

    jobs = range(active.size)
    if options.threads > 1 and not options.deterministic:
        pool = ThreadPool(nodes=options.threads)
        try:
            parts = pool.map(contribution, jobs)
        finally:
            pool.close()
            pool.join()
            pool.clear()
    else:
        parts = [contribution(k) for k in jobs]

    sensitivity = np.zeros(m.dims, dtype=complex)
    for part in parts:
        sensitivity += part

    # d kappa / d v0 = 2 kappa / v0
    g = -np.real(sensitivity * 2.0 * A.kappa / m.v0)
    g[m.water_mask] = 0.0
    return g

#                                                                     Objective
# =============================================================================


class Objective:
    """Misfit and gradient of one mono-frequency stage as functions of the
    flattened V0 grid

    The stencil weight field and the absorbing-profile velocity are taken
    from the first model evaluated and kept for the whole stage. Evaluations
    are cached on the last model, so calling ``fun`` then ``grad`` at the
    same point costs one factorization.

    Parameters
    ----------
    model
        model of the stage; its passive fields are used for every evaluation
    data
        observed gather at ``frequency``
    acquisition
        source and receiver positions
    options, optional
        modelling settings
    estimate_signatures, optional
        re-estimate the source signatures at every evaluation, by default
        True
    """

    def __init__(self, model: VtiModel, data: FrequencyData,
                 acquisition: Acquisition,
                 options: Optional[ModelingOptions] = None,
                 estimate_signatures: bool = True):
        self.model = model
        self.data = data
        self.acquisition = acquisition
        self.options = options if options is not None else ModelingOptions()
        self.estimate_signatures = estimate_signatures
        self.frequency = data.frequency

        self.weight_field: Optional[np.ndarray] = None
        self.reference_velocity: Optional[float] = None
        self.symbolic: Optional[SymbolicFactorization] = None
        self.signatures = np.asarray(data.signatures, dtype=complex)
        self.n_facto = 0
        self._cache: Optional[Tuple[bytes, float, np.ndarray]] = None

    def _evaluate(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        if self._cache is not None and self._cache[0] == key:
            return self._cache[1], self._cache[2]

        m = self.model.with_v0(x)
        simulation = simulate(
            m, self.frequency, self.acquisition, self.options,
            weight_field=self.weight_field,
            reference_velocity=self.reference_velocity,
            symbolic=self.symbolic)
        self.n_facto += 1

        if self.weight_field is None:
            self.weight_field = simulation.operator.weight_field
            self.reference_velocity = simulation.operator.reference_velocity
        if self.symbolic is None:
            self.symbolic = simulation.factorization.symbolic

        if self.estimate_signatures:
            self.signatures = estimate_signature(
                self.data.gather, simulation.d_unit, self.data.mask)

        d_sim = self.signatures[:, None] * simulation.d_unit
        J = misfit(self.data.gather, d_sim, self.data.mask)
        g = gradient(m, self.data, self.acquisition, simulation,
                     self.signatures, self.options).ravel()

        logger.debug(f"Objective at {self.frequency} Hz: J={J:.6e}, "
                     f"|g|={np.linalg.norm(g):.3e}")
        self._cache = (key, J, g)
        return J, g

    def __call__(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        return self._evaluate(x)

    def fun(self, x: np.ndarray) -> float:
        return self._evaluate(x)[0]

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self._evaluate(x)[1].copy()
