"""Optical devices and their truncated-space unitaries.

Three interactions drive everything:

  * Converter -- pump/idler exchange with a strong classical signal field.
    Heisenberg action (theta = coupling * interaction time, phi_s the drive
    phase):
        a_p -> a_p cos(theta) + e^{+i phi_s} a_i sin(theta)
        a_i -> a_i cos(theta) - e^{-i phi_s} a_p sin(theta)
    A passive beam-splitter map: no a^dag terms, hence no spontaneous noise.

  * Amplifier -- signal/idler two-mode squeezing with a strong classical pump.
    Heisenberg action (r = squeeze parameter, G = cosh r, g = -e^{i phi_p} sinh r):
        a_s -> G a_s + g a_i^dag
        a_i -> G a_i + g a_s^dag
    The a^dag terms are the spontaneous-noise source.

  * TrilinearCoupler -- all three fields quantized, a_p a_s^dag a_i^dag + h.c.
    Conserves n_p + n_s and n_s - n_i, so its generator is block diagonal over
    tiny charge sectors; each block is exponentiated densely and exactly.

The unitaries are built as exp of explicitly anti-Hermitian generators, so
they are unitary to machine precision regardless of truncation; truncation
error shows up only as state leakage, which the constructors guard against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.linalg import expm

from .errors import CutoffTooSmall, DimensionMismatch, NonGaussianDevice
from .fock import FockDensityOp, PureState, State, annihilation_matrix, apply_loss, apply_matrix
from .registry import ModeRegistry


@dataclass(frozen=True)
class Converter:
    pump_mode: str
    idler_mode: str
    theta: float
    phi_s: float = 0.0

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be >= 0; phases carry all sign structure")
        if self.pump_mode == self.idler_mode:
            raise ValueError("converter modes must be distinct")

    @property
    def modes(self):
        return (self.pump_mode, self.idler_mode)


@dataclass(frozen=True)
class Amplifier:
    signal_mode: str
    idler_mode: str
    squeeze: float
    phi_p: float = 0.0

    def __post_init__(self):
        if self.squeeze < 0:
            raise ValueError("squeeze must be >= 0; phases carry all sign structure")
        if self.signal_mode == self.idler_mode:
            raise ValueError("amplifier modes must be distinct")

    @property
    def modes(self):
        return (self.signal_mode, self.idler_mode)


@dataclass(frozen=True)
class TrilinearCoupler:
    pump_mode: str
    signal_mode: str
    idler_mode: str
    eta_tau: float
    phase: float = 0.0

    def __post_init__(self):
        if self.eta_tau < 0:
            raise ValueError("eta_tau must be >= 0; phases carry all sign structure")
        if len({self.pump_mode, self.signal_mode, self.idler_mode}) != 3:
            raise ValueError("trilinear coupler modes must be distinct")

    @property
    def modes(self):
        return (self.pump_mode, self.signal_mode, self.idler_mode)


@dataclass(frozen=True)
class PhaseShift:
    mode: str
    phi: float

    @property
    def modes(self):
        return (self.mode,)


@dataclass(frozen=True)
class Attenuator:
    mode: str
    transmission: float

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError(f"transmission {self.transmission} outside [0, 1]")

    @property
    def modes(self):
        return (self.mode,)


Device = Union[Converter, Amplifier, TrilinearCoupler, PhaseShift, Attenuator]


@dataclass(frozen=True)
class Circuit:
    registry: ModeRegistry
    devices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "devices", tuple(self.devices))
        for dev in self.devices:
            for m in dev.modes:
                self.registry.index(m)  # raises UnknownMode


# ---------------------------------------------------------------------------
# generators and blocked exponentials


def _blocked_expm(generator: np.ndarray, charges: np.ndarray) -> np.ndarray:
    """exp(K) for a charge-conserving anti-Hermitian K, one sector at a time.

    ``charges`` has one row per basis state; states sharing a row form an
    invariant subspace of K.
    """
    dim = generator.shape[0]
    U = np.zeros((dim, dim), dtype=complex)
    _, inverse = np.unique(charges, axis=0, return_inverse=True)
    for b in range(inverse.max() + 1):
        idx = np.nonzero(inverse == b)[0]
        if len(idx) == 1:
            U[idx[0], idx[0]] = np.exp(generator[idx[0], idx[0]])
        else:
            block = generator[np.ix_(idx, idx)]
            U[np.ix_(idx, idx)] = expm(block)
    return U


def converter_generator(registry: ModeRegistry, dev: Converter) -> np.ndarray:
    ap = annihilation_matrix(registry, dev.pump_mode)
    ai = annihilation_matrix(registry, dev.idler_mode)
    return np.exp(1j * dev.phi_s) * ap.conj().T @ ai - np.exp(-1j * dev.phi_s) * ap @ ai.conj().T


def converter_unitary(registry: ModeRegistry, dev: Converter, blocked: bool = True) -> np.ndarray:
    """exp of theta times the converter generator; conserves n_p + n_i exactly."""
    K = dev.theta * converter_generator(registry, dev)
    if not blocked:
        return expm(K)
    occ = registry.occupations()
    p, i = registry.index(dev.pump_mode), registry.index(dev.idler_mode)
    others = [m for m in range(registry.num_modes) if m not in (p, i)]
    charges = np.column_stack([occ[:, p] + occ[:, i]] + [occ[:, m] for m in others])
    return _blocked_expm(K, charges)


def amplifier_required_cutoff(squeeze: float, tail_tol: float = 1e-8) -> int:
    """Smallest per-mode cutoff keeping the two-mode-squeezed-vacuum tail <= tol."""
    if squeeze == 0.0:
        return 1
    t2 = np.tanh(squeeze) ** 2
    # tail beyond cutoff c is t2^(c+1)
    c = int(np.ceil(np.log(tail_tol) / np.log(t2))) - 1
    return max(c, 1)


def amplifier_generator(registry: ModeRegistry, dev: Amplifier) -> np.ndarray:
    a_s = annihilation_matrix(registry, dev.signal_mode)
    a_i = annihilation_matrix(registry, dev.idler_mode)
    return (
        -np.exp(1j * dev.phi_p) * a_s.conj().T @ a_i.conj().T
        + np.exp(-1j * dev.phi_p) * a_s @ a_i
    )


def amplifier_unitary(registry: ModeRegistry, dev: Amplifier, blocked: bool = True) -> np.ndarray:
    """Two-mode squeezer; conserves n_s - n_i exactly."""
    cmin = min(registry.cutoff(dev.signal_mode), registry.cutoff(dev.idler_mode))
    tail = np.tanh(dev.squeeze) ** (2 * (cmin + 1)) if dev.squeeze > 0 else 0.0
    if tail > 1e-8:
        need = amplifier_required_cutoff(dev.squeeze)
        raise CutoffTooSmall(
            f"squeeze {dev.squeeze} needs cutoffs >= {need} on both modes "
            f"(have {cmin}, squeezed-vacuum tail {tail:.3e})",
            required_cutoff=need,
        )
    K = dev.squeeze * amplifier_generator(registry, dev)
    if not blocked:
        return expm(K)
    occ = registry.occupations()
    s, i = registry.index(dev.signal_mode), registry.index(dev.idler_mode)
    others = [m for m in range(registry.num_modes) if m not in (s, i)]
    charges = np.column_stack([occ[:, s] - occ[:, i]] + [occ[:, m] for m in others])
    return _blocked_expm(K, charges)


def trilinear_generator(registry: ModeRegistry, dev: TrilinearCoupler) -> np.ndarray:
    ap = annihilation_matrix(registry, dev.pump_mode)
    a_s = annihilation_matrix(registry, dev.signal_mode)
    a_i = annihilation_matrix(registry, dev.idler_mode)
    return (
        np.exp(-1j * dev.phase) * ap.conj().T @ a_s @ a_i
        - np.exp(1j * dev.phase) * ap @ a_s.conj().T @ a_i.conj().T
    )


def trilinear_unitary(
    registry: ModeRegistry, dev: TrilinearCoupler, blocked: bool = True
) -> np.ndarray:
    """Full three-wave-mixing evolution, exact on each conserved-charge sector.

    Sectors are labeled by (n_p + n_s, n_s - n_i); for the states of interest
    they are tiny (dimension <= min occupation + 1), so exact dynamics is cheap.
    """
    K = dev.eta_tau * trilinear_generator(registry, dev)
    if not blocked:
        return expm(K)
    occ = registry.occupations()
    p = registry.index(dev.pump_mode)
    s = registry.index(dev.signal_mode)
    i = registry.index(dev.idler_mode)
    others = [m for m in range(registry.num_modes) if m not in (p, s, i)]
    charges = np.column_stack(
        [occ[:, p] + occ[:, s], occ[:, s] - occ[:, i]] + [occ[:, m] for m in others]
    )
    return _blocked_expm(K, charges)


def phase_shift_unitary(registry: ModeRegistry, dev: PhaseShift) -> np.ndarray:
    occ = registry.occupations()
    n = occ[:, registry.index(dev.mode)]
    return np.diag(np.exp(1j * dev.phi * n))


def device_unitary(registry: ModeRegistry, dev: Device, blocked: bool = True) -> np.ndarray:
    if isinstance(dev, Converter):
        return converter_unitary(registry, dev, blocked)
    if isinstance(dev, Amplifier):
        return amplifier_unitary(registry, dev, blocked)
    if isinstance(dev, TrilinearCoupler):
        return trilinear_unitary(registry, dev, blocked)
    if isinstance(dev, PhaseShift):
        return phase_shift_unitary(registry, dev)
    raise TypeError(f"{type(dev).__name__} has no unitary representation")


# ---------------------------------------------------------------------------
# applying devices to Fock states


def apply_device(state: State, dev: Device) -> State:
    """Apply one device to a Fock-backend state.

    Unitary devices are built on the sub-registry of their own modes and
    contracted onto the state tensor, so large spectator modes never inflate
    the exponentiated matrix.
    """
    reg = state.registry
    if isinstance(dev, Attenuator):
        return apply_loss(state, dev.mode, dev.transmission)
    sub = reg.subregistry(dev.modes)
    U = device_unitary(sub, dev)
    return apply_matrix(state, U, dev.modes)


def compile_circuit(circuit: Circuit, backend: str = "fock"):
    """Left-to-right composition of the circuit's devices as a pure function.

    backend="fock" returns PureState/FockDensityOp -> State;
    backend="gaussian" returns GaussianState -> GaussianState and rejects
    non-Gaussian devices up front.
    """
    if backend == "fock":
        devices = circuit.devices

        def run_fock(state: State) -> State:
            for dev in devices:
                state = apply_device(state, dev)
            return state

        return run_fock
    if backend == "gaussian":
        for dev in circuit.devices:
            if isinstance(dev, TrilinearCoupler):
                raise NonGaussianDevice(
                    "trilinear coupler is not a Gaussian transformation"
                )
        from .gaussian import gaussian_apply

        devices = circuit.devices

        def run_gaussian(state):
            for dev in devices:
                state = gaussian_apply(state, dev)
            return state

        return run_gaussian
    raise ValueError(f"unknown backend {backend!r}")
