"""Deterministic scenario runners: each one rebuilds a figure-level claim of
coherent frequency down-conversion as a desk-scale numerical scan.

All runners are pure functions of their parameters and return a ScanResult;
nothing here touches global state, so scan points can be evaluated in
parallel by callers if desired.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .devices import (
    Amplifier,
    Attenuator,
    Converter,
    TrilinearCoupler,
    apply_device,
    device_unitary,
)
from .errors import EnergyConservationViolation
from .fock import (
    PureState,
    apply_matrix,
    coherent_required_cutoff,
    fidelity_pure_mixed,
    make_coherent,
    make_fock,
    make_vacuum,
    mean_photon,
    product_state,
    quadrature_variance,
    reduced_density,
)
from .gaussian import coherent_gaussian, gaussian_apply, gaussian_mean_photon, vacuum_gaussian
from .registry import ModeRegistry


@dataclass(frozen=True)
class ScanResult:
    name: str
    abscissa_label: str
    column_labels: tuple[str, ...]
    rows: tuple[tuple[float, tuple[float, ...]], ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "column_labels", tuple(self.column_labels))
        rows = tuple((float(a), tuple(float(v) for v in vals)) for a, vals in self.rows)
        for _, vals in rows:
            if len(vals) != len(self.column_labels):
                raise ValueError("row arity does not match column labels")
        xs = [a for a, _ in rows]
        diffs = np.diff(xs)
        if len(xs) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("abscissa must be strictly monotone")
        object.__setattr__(self, "rows", rows)

    def column(self, label: str) -> np.ndarray:
        j = self.column_labels.index(label)
        return np.array([vals[j] for _, vals in self.rows])

    @property
    def abscissa(self) -> np.ndarray:
        return np.array([a for a, _ in self.rows])


@dataclass(frozen=True)
class WdmSpec:
    pump_frequency: float
    channels: tuple[tuple[float, float, float], ...]  # (signal_frequency, theta_k, phi_k)

    def __post_init__(self):
        chans = tuple((float(f), float(t), float(p)) for f, t, p in self.channels)
        if len(chans) < 1:
            raise ValueError("need at least one WDM channel")
        for f, _, _ in chans:
            if self.pump_frequency - f <= 0:
                raise EnergyConservationViolation(
                    f"signal frequency {f} leaves non-positive idler frequency "
                    f"{self.pump_frequency - f} (pump {self.pump_frequency})"
                )
        object.__setattr__(self, "channels", chans)

    @property
    def idler_frequencies(self) -> tuple[float, ...]:
        return tuple(self.pump_frequency - f for f, _, _ in self.channels)


def _meta(backend: str, registry: ModeRegistry, **params) -> dict[str, str]:
    meta = {"backend": backend}
    meta["cutoffs"] = ";".join(f"{m.label}={m.cutoff}" for m in registry.modes)
    for k, v in params.items():
        meta[k] = repr(v) if isinstance(v, (int, float, complex)) else str(v)
    return meta


# ---------------------------------------------------------------------------
# linearity of the converted output in the pump attenuation


def run_linearity(
    transmissions,
    theta: float,
    alpha_pump: complex,
    noise_floor: float = 0.0,
    backend: str = "fock",
    cutoff: int | None = None,
) -> ScanResult:
    """Attenuated coherent pump through a weak converter; idler photon number
    per attenuator transmission.  With zero noise floor the curve is exactly
    T * |alpha|^2 * sin^2(theta), i.e. log-log slope one.
    """
    ts = [float(t) for t in transmissions]
    if not ts or any(not (0.0 < t <= 1.0) for t in ts):
        raise ValueError("transmissions must lie in (0, 1]")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("transmissions must be strictly decreasing")
    if noise_floor < 0:
        raise ValueError("noise_floor must be >= 0")

    c = cutoff if cutoff is not None else coherent_required_cutoff(alpha_pump)
    registry = ModeRegistry([("pump", 2.0, c), ("idler", 1.0, c)])
    att = lambda T: Attenuator("pump", T)
    conv = Converter("pump", "idler", theta)

    rows = []
    for T in ts:
        if backend == "fock":
            state = make_coherent(registry, "pump", alpha_pump)
            state = apply_device(state, att(T))
            state = apply_device(state, conv)
            n_i = mean_photon(state, "idler")
        elif backend == "gaussian":
            g = coherent_gaussian(registry, {"pump": alpha_pump})
            g = gaussian_apply(g, att(T))
            g = gaussian_apply(g, conv)
            n_i = gaussian_mean_photon(g, "idler")
        else:
            raise ValueError(f"unknown backend {backend!r}")
        rows.append((T, (n_i + noise_floor,)))

    return ScanResult(
        name="linearity",
        abscissa_label="transmission",
        column_labels=("idler_mean_photons",),
        rows=tuple(rows),
        metadata=_meta(
            backend, registry, theta=theta, alpha_pump=alpha_pump, noise_floor=noise_floor
        ),
    )


# ---------------------------------------------------------------------------
# interference fringe of the converted field against a laser reference


def run_fringe(
    phi_p_points,
    alpha_pump: complex,
    alpha_ref: complex,
    theta: float,
    phi_s: float = 0.0,
    backend: str = "fock",
    cutoff: int | None = None,
) -> ScanResult:
    """Pump-phase scan: convert a coherent pump, then beat the idler against a
    coherent reference on a balanced combiner and read one output port.

    Degenerate configuration: the idler and the reference sit at half the pump
    frequency, so they interfere directly.
    """
    phis = [float(p) for p in phi_p_points]
    amax = max(abs(alpha_pump), abs(alpha_ref)) + 1e-12
    c = cutoff if cutoff is not None else coherent_required_cutoff(amax * np.sqrt(2))
    registry = ModeRegistry([("pump", 2.0, c), ("idler", 1.0, c), ("ref", 1.0, c)])
    conv = Converter("pump", "idler", theta, phi_s)
    combiner = Converter("idler", "ref", np.pi / 4)
    if backend == "fock":
        # both devices are fixed across the scan; exponentiate them once
        u_conv = device_unitary(registry.subregistry(conv.modes), conv)
        u_comb = device_unitary(registry.subregistry(combiner.modes), combiner)

    rows = []
    for phi_p in phis:
        a_p = alpha_pump * np.exp(1j * phi_p)
        if backend == "fock":
            pump = make_coherent(ModeRegistry([("pump", 2.0, c)]), "pump", a_p)
            idler = make_vacuum(ModeRegistry([("idler", 1.0, c)]))
            ref = make_coherent(ModeRegistry([("ref", 1.0, c)]), "ref", alpha_ref)
            state = product_state(pump, idler, ref)
            state = apply_matrix(state, u_conv, conv.modes)
            state = apply_matrix(state, u_comb, combiner.modes)
            out = mean_photon(state, "idler")
        elif backend == "gaussian":
            g = coherent_gaussian(registry, {"pump": a_p, "ref": alpha_ref})
            g = gaussian_apply(g, conv)
            g = gaussian_apply(g, combiner)
            out = gaussian_mean_photon(g, "idler")
        else:
            raise ValueError(f"unknown backend {backend!r}")
        rows.append((phi_p, (out,)))

    return ScanResult(
        name="fringe",
        abscissa_label="pump_phase",
        column_labels=("combined_mean_photons",),
        rows=tuple(rows),
        metadata=_meta(
            backend,
            registry,
            alpha_pump=alpha_pump,
            alpha_ref=alpha_ref,
            theta=theta,
            phi_s=phi_s,
        ),
    )


def fringe_visibility(result: ScanResult) -> float:
    """(I_max - I_min) / (I_max + I_min) of the fringe.

    The model output is an exact sinusoid in the scanned phase, so the
    extrema are taken from a least-squares sinusoid fit rather than from the
    sampled points (which would undershoot between samples).
    """
    phi = result.abscissa
    y = result.column(result.column_labels[0])
    basis = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    mean, amp = coef[0], float(np.hypot(coef[1], coef[2]))
    if mean + amp == 0:
        return 0.0
    return amp / mean


# ---------------------------------------------------------------------------
# converter vs amplifier noise


def run_noise_comparison(
    strength_points, backend: str = "gaussian", cutoff: int | None = None
) -> ScanResult:
    """Vacuum-input comparison at matched interaction strength s.

    Converter(theta=s): idler quadrature variance stays at the vacuum 1/4.
    Amplifier(squeeze=s): idler variance grows as (2 sinh^2 s + 1)/4 and the
    idler fills with sinh^2 s spontaneous photons -- the a^dag-term noise.
    """
    ss = [float(s) for s in strength_points]
    if any(s < 0 for s in ss):
        raise ValueError("strengths must be >= 0")

    from .devices import amplifier_required_cutoff

    if backend == "fock":
        # the retained two-mode-squeezed tail feeds straight into the variance
        # estimate, so size the cutoff from a tail tolerance well below the
        # 1e-8 accuracy the columns are expected to carry
        c_amp = (
            cutoff
            if cutoff is not None
            else max(amplifier_required_cutoff(max(ss), tail_tol=1e-10), 5)
        )
        c_conv = cutoff if cutoff is not None else 5
    else:
        c_amp = c_conv = cutoff if cutoff is not None else 1
    reg_conv = ModeRegistry([("pump", 2.0, c_conv), ("idler", 1.0, c_conv)])
    reg_amp = ModeRegistry([("signal", 1.2, c_amp), ("idler", 0.8, c_amp)])

    rows = []
    for s in ss:
        conv = Converter("pump", "idler", s)
        amp = Amplifier("signal", "idler", s)
        if backend == "fock":
            cstate = apply_device(make_vacuum(reg_conv), conv)
            astate = apply_device(make_vacuum(reg_amp), amp)
            v_conv = quadrature_variance(cstate, "idler", 0.0)
            v_amp = quadrature_variance(astate, "idler", 0.0)
            n_amp = mean_photon(astate, "idler")
        elif backend == "gaussian":
            cstate = gaussian_apply(vacuum_gaussian(reg_conv), conv)
            astate = gaussian_apply(vacuum_gaussian(reg_amp), amp)
            i_c = reg_conv.index("idler")
            i_a = reg_amp.index("idler")
            v_conv = float(cstate.cov[2 * i_c, 2 * i_c])
            v_amp = float(astate.cov[2 * i_a, 2 * i_a])
            n_amp = gaussian_mean_photon(astate, "idler")
        else:
            raise ValueError(f"unknown backend {backend!r}")
        rows.append((s, (v_conv, v_amp, n_amp)))

    return ScanResult(
        name="noise_comparison",
        abscissa_label="strength",
        column_labels=(
            "converter_variance",
            "amplifier_variance",
            "amplifier_spontaneous_photons",
        ),
        rows=tuple(rows),
        metadata=_meta(backend, reg_amp),
    )


# ---------------------------------------------------------------------------
# pump depletion: trilinear dynamics converging to the beam-splitter picture


DEPLETION_SIGNAL_CUTOFF_FLOOR = 40


def run_depletion_convergence(
    alpha_s_points,
    theta: float,
    pump_input: PureState,
    signal_cutoff: int | None = None,
) -> ScanResult:
    """Exact trilinear evolution with a coherent signal of growing amplitude,
    holding eta_tau * |alpha_s| = theta, compared against the linearized
    converter.  Fidelity of the reduced pump+idler output against the
    converter prediction approaches one as the signal becomes classical.

    The signal cutoff is auto-sized (per-point) so the truncated coherent
    state obeys the package-wide tail policy; a floor of 40 keeps small
    amplitudes comparable.
    """
    if pump_input.registry.num_modes != 1:
        raise ValueError("pump_input must live on a single mode")
    alphas = [float(a) for a in alpha_s_points]
    if any(a <= 0 for a in alphas):
        raise ValueError("signal amplitudes must be > 0")
    c_p = pump_input.registry.cutoffs[0]

    # linearized prediction: same pump input through a converter at theta
    reg2 = ModeRegistry([("pump", 2.0, c_p), ("idler", 1.0, c_p)])
    pump2 = PureState(ModeRegistry([("pump", 2.0, c_p)]), pump_input.amplitudes)
    target = apply_device(
        product_state(pump2, make_vacuum(ModeRegistry([("idler", 1.0, c_p)]))),
        Converter("pump", "idler", theta),
    )

    rows = []
    for a_s in alphas:
        c_s = signal_cutoff
        if c_s is None:
            c_s = max(DEPLETION_SIGNAL_CUTOFF_FLOOR, coherent_required_cutoff(a_s))
        pump1 = PureState(ModeRegistry([("pump", 2.0, c_p)]), pump_input.amplitudes)
        signal = make_coherent(ModeRegistry([("signal", 1.0, c_s)]), "signal", a_s)
        idler = make_vacuum(ModeRegistry([("idler", 1.0, c_p)]))
        state = product_state(pump1, signal, idler)
        coupler = TrilinearCoupler("pump", "signal", "idler", eta_tau=theta / a_s)
        state = apply_device(state, coupler)
        reduced = reduced_density(state, ["pump", "idler"])
        fid = fidelity_pure_mixed(target, reduced)
        rows.append((a_s, (fid,)))

    return ScanResult(
        name="depletion_convergence",
        abscissa_label="alpha_s",
        column_labels=("fidelity_vs_converter",),
        rows=tuple(rows),
        metadata=_meta("fock", reg2, theta=theta, pump_cutoff=c_p),
    )


# ---------------------------------------------------------------------------
# single-photon wavelength division multiplexing


def run_wdm(spec: WdmSpec) -> tuple[ScanResult, np.ndarray]:
    """Single pump photon through a cascade of converters, one per channel.

    Returns the per-channel probabilities |c_k|^2 as a ScanResult plus the
    complex amplitude vector (c_0, c_1, ..., c_K) with c_0 the residual pump
    amplitude.  The cascade follows the product rule
    c_k = -e^{-i phi_k} sin(theta_k) * prod_{j<k} cos(theta_j).
    """
    K = len(spec.channels)
    modes = [("pump", spec.pump_frequency, 1)]
    for k, f_i in enumerate(spec.idler_frequencies, start=1):
        modes.append((f"idler{k}", f_i, 1))
    registry = ModeRegistry(modes)

    state = make_fock(registry, [1] + [0] * K)
    for k, (_, theta_k, phi_k) in enumerate(spec.channels, start=1):
        state = apply_device(state, Converter("pump", f"idler{k}", theta_k, phi_k))

    amp = state.tensorized()
    c = np.zeros(K + 1, dtype=complex)
    c[0] = amp[(1,) + (0,) * K]
    for k in range(1, K + 1):
        idx = [0] * (K + 1)
        idx[k] = 1
        c[k] = amp[tuple(idx)]
    total = float(np.sum(np.abs(c) ** 2))
    if abs(total - 1.0) > 1e-10:
        raise AssertionError(
            f"single-excitation amplitudes lost normalization: sum |c|^2 = {total}"
        )

    rows = tuple(
        (float(k), (spec.idler_frequencies[k - 1], float(np.abs(c[k]) ** 2)))
        for k in range(1, K + 1)
    )
    result = ScanResult(
        name="wdm",
        abscissa_label="channel",
        column_labels=("idler_frequency", "probability"),
        rows=rows,
        metadata=_meta(
            "fock",
            registry,
            pump_frequency=spec.pump_frequency,
            residual_pump_probability=float(np.abs(c[0]) ** 2),
        ),
    )
    return result, c
