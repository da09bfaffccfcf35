"""
No-U-Turn Transition with Multinomial Trajectory Sampling

The target is given as `density(q) -> (log_density, gradient)` on R^d.
Trajectories grow by doubling in a random direction with a leapfrog
integrator under a diagonal metric. Within a subtree states are drawn in
proportion to exp(-H); across doublings the new subtree's proposal
replaces the current one with probability min(1, w_new / w_old). A
subtree stops when its end points turn back on each other (velocities
M^-1 p, not momenta) or when the energy error exceeds the divergence
threshold.
"""

import logging
import math
from typing import Callable, NamedTuple, Tuple

import numpy as np

from dtanma.config import SamplerDefaults

logger = logging.getLogger(__name__)

Density = Callable[[np.ndarray], Tuple[float, np.ndarray]]


class PhaseState(NamedTuple):
    """
    Position, momentum and the density at the position
    """

    q: np.ndarray
    p: np.ndarray
    log_density: float
    gradient: np.ndarray


class Transition(NamedTuple):
    """
    Result of one NUTS transition
    """

    q: np.ndarray
    log_density: float
    gradient: np.ndarray
    accept_stat: float
    tree_depth: int
    n_leapfrog: int
    divergent: bool


class _Subtree(NamedTuple):
    backward: PhaseState
    forward: PhaseState
    proposal: PhaseState
    log_weight: float
    turning: bool
    diverging: bool
    accept_sum: float
    n_leapfrog: int


def kinetic_energy(p: np.ndarray, inv_mass: np.ndarray) -> float:
    return 0.5 * float(np.sum(p * p * inv_mass))


def leapfrog(
    density: Density, state: PhaseState, step_size: float, inv_mass: np.ndarray
) -> PhaseState:
    """
    One leapfrog step (a negative step size integrates backward in time)
    """
    p_half = state.p + 0.5 * step_size * state.gradient
    q_new = state.q + step_size * inv_mass * p_half
    log_density, gradient = density(q_new)
    p_new = p_half + 0.5 * step_size * gradient
    return PhaseState(q=q_new, p=p_new, log_density=log_density, gradient=gradient)


def is_turning(backward: PhaseState, forward: PhaseState, inv_mass: np.ndarray) -> bool:
    """
    End-point U-turn criterion under a diagonal metric
    """
    dq = forward.q - backward.q
    return bool(
        np.dot(dq, inv_mass * backward.p) < 0.0 or np.dot(dq, inv_mass * forward.p) < 0.0
    )


def _hamiltonian(state: PhaseState, inv_mass: np.ndarray) -> float:
    return -state.log_density + kinetic_energy(state.p, inv_mass)


def _build_tree(
    density: Density,
    edge: PhaseState,
    direction: int,
    depth: int,
    step_size: float,
    inv_mass: np.ndarray,
    initial_energy: float,
    divergence_threshold: float,
    rng: np.random.Generator,
) -> _Subtree:
    """
    Build a subtree of 2**depth leapfrog steps from `edge`
    """
    if depth == 0:
        state = leapfrog(density, edge, direction * step_size, inv_mass)
        energy = _hamiltonian(state, inv_mass)
        finite = math.isfinite(energy) and bool(np.all(np.isfinite(state.gradient)))
        energy_error = energy - initial_energy if finite else math.inf
        return _Subtree(
            backward=state,
            forward=state,
            proposal=state,
            log_weight=-energy_error,
            turning=False,
            diverging=energy_error > divergence_threshold,
            accept_sum=math.exp(min(0.0, -energy_error)) if finite else 0.0,
            n_leapfrog=1,
        )
    inner = _build_tree(
        density,
        edge,
        direction,
        depth - 1,
        step_size,
        inv_mass,
        initial_energy,
        divergence_threshold,
        rng,
    )
    if inner.turning or inner.diverging:
        return inner
    outer_edge = inner.forward if direction > 0 else inner.backward
    outer = _build_tree(
        density,
        outer_edge,
        direction,
        depth - 1,
        step_size,
        inv_mass,
        initial_energy,
        divergence_threshold,
        rng,
    )
    if direction > 0:
        backward, forward = inner.backward, outer.forward
    else:
        backward, forward = outer.backward, inner.forward
    log_weight = float(np.logaddexp(inner.log_weight, outer.log_weight))
    proposal = inner.proposal
    if (
        not (outer.turning or outer.diverging)
        and math.isfinite(log_weight)
        and rng.random() < math.exp(outer.log_weight - log_weight)
    ):
        proposal = outer.proposal
    return _Subtree(
        backward=backward,
        forward=forward,
        proposal=proposal,
        log_weight=log_weight,
        turning=outer.turning or is_turning(backward, forward, inv_mass),
        diverging=outer.diverging,
        accept_sum=inner.accept_sum + outer.accept_sum,
        n_leapfrog=inner.n_leapfrog + outer.n_leapfrog,
    )


def nuts_transition(
    density: Density,
    q: np.ndarray,
    log_density: float,
    gradient: np.ndarray,
    step_size: float,
    inv_mass: np.ndarray,
    rng: np.random.Generator,
    max_tree_depth: int = SamplerDefaults.MAX_TREE_DEPTH,
    divergence_threshold: float = SamplerDefaults.DIVERGENCE_THRESHOLD,
) -> Transition:
    """
    Draw the next state of a chain

    Parameters
    ----------
    density: Density
        Log density and gradient callable
    q: np.ndarray
        Current position
    log_density: float
        Log density at `q`
    gradient: np.ndarray
        Gradient at `q`
    step_size: float
    inv_mass: np.ndarray
        Diagonal of the inverse metric
    rng: np.random.Generator
        The chain's private stream
    max_tree_depth: int
    divergence_threshold: float
        Energy error marking a divergent transition

    Returns
    -------
    Transition
    """
    p = rng.standard_normal(q.shape) / np.sqrt(inv_mass)
    start = PhaseState(q=q, p=p, log_density=log_density, gradient=gradient)
    initial_energy = _hamiltonian(start, inv_mass)
    backward = forward = proposal = start
    log_weight = 0.0
    accept_sum = 0.0
    n_leapfrog = 0
    divergent = False
    depth = 0
    while depth < max_tree_depth:
        direction = 1 if rng.random() < 0.5 else -1
        edge = forward if direction > 0 else backward
        subtree = _build_tree(
            density,
            edge,
            direction,
            depth,
            step_size,
            inv_mass,
            initial_energy,
            divergence_threshold,
            rng,
        )
        depth += 1
        accept_sum += subtree.accept_sum
        n_leapfrog += subtree.n_leapfrog
        if subtree.diverging:
            divergent = True
            break
        if subtree.turning:
            break
        if rng.random() < math.exp(min(0.0, subtree.log_weight - log_weight)):
            proposal = subtree.proposal
        log_weight = float(np.logaddexp(log_weight, subtree.log_weight))
        if direction > 0:
            forward = subtree.forward
        else:
            backward = subtree.backward
        if is_turning(backward, forward, inv_mass):
            break
    return Transition(
        q=proposal.q,
        log_density=proposal.log_density,
        gradient=proposal.gradient,
        accept_stat=accept_sum / max(1, n_leapfrog),
        tree_depth=depth,
        n_leapfrog=n_leapfrog,
        divergent=divergent,
    )


def find_reasonable_step_size(
    density: Density,
    q: np.ndarray,
    log_density: float,
    gradient: np.ndarray,
    inv_mass: np.ndarray,
    rng: np.random.Generator,
    initial: float = SamplerDefaults.STEP_SIZE_INIT,
) -> float:
    """
    Double or halve the step size until one leapfrog step crosses an
    acceptance probability of 0.5
    """
    step_size = float(initial)
    p = rng.standard_normal(q.shape) / np.sqrt(inv_mass)
    start = PhaseState(q=q, p=p, log_density=log_density, gradient=gradient)
    initial_energy = _hamiltonian(start, inv_mass)

    def log_accept(eps: float) -> float:
        energy = _hamiltonian(leapfrog(density, start, eps, inv_mass), inv_mass)
        return initial_energy - energy if math.isfinite(energy) else -math.inf

    direction = 1.0 if log_accept(step_size) > math.log(0.5) else -1.0
    while SamplerDefaults.STEP_SIZE_MIN <= step_size <= SamplerDefaults.STEP_SIZE_MAX:
        step_size *= 2.0**direction
        accept = log_accept(step_size)
        if (direction > 0 and accept < math.log(0.5)) or (
            direction < 0 and accept > math.log(0.5)
        ):
            break
    return float(
        min(max(step_size, SamplerDefaults.STEP_SIZE_MIN), SamplerDefaults.STEP_SIZE_MAX)
    )
