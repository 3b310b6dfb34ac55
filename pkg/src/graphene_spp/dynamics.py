"""Propagation of the coupled-amplitude equations i da/dx = (H(x) - i diag(alpha)) a.

The integrator is a classic fixed-step 4th-order scheme with the coupling
samples linearly interpolated inside each schedule interval. Substeps always
subdivide an interval exactly, so stages never straddle a schedule knot and
the 4th-order convergence behavior survives the interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import SppMode
from .geometry import CouplingSchedule, DeviceGeometry, sheet_separations


class PropagationError(RuntimeError):
    """Numerical blow-up during propagation; carries the position."""

    def __init__(self, message: str, position: float):
        super().__init__(f"{message} at x = {position:.6e} m")
        self.position = position


@dataclass(frozen=True)
class AmplitudeState:
    """Channel amplitudes at one position along the device."""

    amplitudes: np.ndarray
    position: float = 0.0

    def __post_init__(self) -> None:
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("amplitudes must be a vector of length >= 2")
        object.__setattr__(self, "amplitudes", a)

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class ChainHamiltonian:
    """Nearest-neighbor chain: symmetric off-diagonal couplings, diagonal loss."""

    couplings: tuple
    loss: tuple = ()

    def __post_init__(self) -> None:
        couplings = tuple(float(c) for c in np.atleast_1d(self.couplings))
        if len(couplings) < 1:
            raise ValueError("need at least one coupling (two channels)")
        loss = self.loss
        if isinstance(loss, (int, float)):
            loss = (float(loss),) * (len(couplings) + 1)
        loss = tuple(float(a) for a in (loss or (0.0,) * (len(couplings) + 1)))
        if len(loss) != len(couplings) + 1:
            raise ValueError("loss vector must have one entry per channel")
        if any(a < 0 for a in loss):
            raise ValueError("loss rates must be >= 0")
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "loss", loss)

    @property
    def dimension(self) -> int:
        return len(self.couplings) + 1

    def matrix(self) -> np.ndarray:
        n = self.dimension
        h = np.zeros((n, n), dtype=float)
        for i, c in enumerate(self.couplings):
            h[i, i + 1] = c
            h[i + 1, i] = c
        return h

    def effective_matrix(self) -> np.ndarray:
        return self.matrix().astype(complex) - 1j * np.diag(self.loss)


@dataclass(frozen=True)
class Trajectory:
    """Amplitudes recorded at every schedule knot."""

    x_grid: np.ndarray
    amplitudes: np.ndarray

    @property
    def intensities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def final_intensities(self) -> np.ndarray:
        return np.abs(self.amplitudes[-1]) ** 2


def _resolve_loss(loss, n: int) -> tuple:
    if isinstance(loss, (int, float)):
        values = (float(loss),) * n
    else:
        values = tuple(float(a) for a in np.atleast_1d(loss))
        if len(values) != n:
            raise ValueError(f"loss must be a scalar or a length-{n} vector")
    if any(a < 0 for a in values):
        raise ValueError("loss rates must be >= 0")
    return values


def _substeps_for(spacing: float, step: float | None) -> int:
    if step is None:
        return 1
    if step <= 0:
        raise ValueError("step must be > 0")
    if step > spacing * (1.0 + 1e-12):
        raise ValueError("step must not exceed the schedule grid spacing")
    return max(1, math.ceil(spacing / step - 1e-12))


def propagate(schedule: CouplingSchedule, initial: AmplitudeState,
              loss=0.0, step: float | None = None) -> Trajectory:
    """Integrate the three-channel system along the schedule.

    loss is the per-channel amplitude decay rate alpha (scalar applies to all
    channels); step, when given, must not exceed the schedule spacing and is
    rounded to an exact subdivision of it.
    """
    a = np.asarray(initial.amplitudes, dtype=complex)
    if a.size != 3:
        raise ValueError("schedule propagation drives a three-channel system")
    if abs(initial.norm_squared - 1.0) > 1e-6:
        raise ValueError("initial state must have unit norm for intensity "
                         "semantics")
    al0, al1, al2 = _resolve_loss(loss, 3)
    x = schedule.x_grid
    o1 = schedule.omega1
    o2 = schedule.omega2
    m = _substeps_for(schedule.spacing, step)

    out = np.empty((len(x), 3), dtype=complex)
    a0, a1, a2 = complex(a[0]), complex(a[1]), complex(a[2])
    out[0] = (a0, a1, a2)
    for j in range(len(x) - 1):
        h = (x[j + 1] - x[j]) / m
        w1a, w1d = o1[j], o1[j + 1] - o1[j]
        w2a, w2d = o2[j], o2[j + 1] - o2[j]
        for s in range(m):
            t0 = s / m
            tm = (s + 0.5) / m
            t1 = (s + 1.0) / m
            u1_0, u2_0 = w1a + w1d * t0, w2a + w2d * t0
            u1_m, u2_m = w1a + w1d * tm, w2a + w2d * tm
            u1_1, u2_1 = w1a + w1d * t1, w2a + w2d * t1

            k0 = -1j * u1_0 * a1 - al0 * a0
            k1 = -1j * (u1_0 * a0 + u2_0 * a2) - al1 * a1
            k2 = -1j * u2_0 * a1 - al2 * a2

            b0, b1, b2 = a0 + 0.5 * h * k0, a1 + 0.5 * h * k1, a2 + 0.5 * h * k2
            l0 = -1j * u1_m * b1 - al0 * b0
            l1 = -1j * (u1_m * b0 + u2_m * b2) - al1 * b1
            l2 = -1j * u2_m * b1 - al2 * b2

            b0, b1, b2 = a0 + 0.5 * h * l0, a1 + 0.5 * h * l1, a2 + 0.5 * h * l2
            m0 = -1j * u1_m * b1 - al0 * b0
            m1 = -1j * (u1_m * b0 + u2_m * b2) - al1 * b1
            m2 = -1j * u2_m * b1 - al2 * b2

            b0, b1, b2 = a0 + h * m0, a1 + h * m1, a2 + h * m2
            n0 = -1j * u1_1 * b1 - al0 * b0
            n1 = -1j * (u1_1 * b0 + u2_1 * b2) - al1 * b1
            n2 = -1j * u2_1 * b1 - al2 * b2

            a0 += h / 6.0 * (k0 + 2.0 * (l0 + m0) + n0)
            a1 += h / 6.0 * (k1 + 2.0 * (l1 + m1) + n1)
            a2 += h / 6.0 * (k2 + 2.0 * (l2 + m2) + n2)
        if not (math.isfinite(a0.real) and math.isfinite(a0.imag)
                and math.isfinite(a1.real) and math.isfinite(a1.imag)
                and math.isfinite(a2.real) and math.isfinite(a2.imag)):
            raise PropagationError("non-finite amplitude", float(x[j + 1]))
        out[j + 1] = (a0, a1, a2)
    return Trajectory(x_grid=x.copy(), amplitudes=out)


def propagate_constant(hamiltonian: ChainHamiltonian, initial,
                       span: float, n_steps: int = 4096) -> Trajectory:
    """Constant-Hamiltonian propagation for any chain dimension."""
    if span < 0:
        raise ValueError("span must be >= 0")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    a = np.asarray(initial, dtype=complex)
    m = hamiltonian.effective_matrix()
    if a.shape != (m.shape[0],):
        raise ValueError("initial state dimension does not match the chain")
    h = span / n_steps
    x = np.linspace(0.0, span, n_steps + 1)
    out = np.empty((n_steps + 1, a.size), dtype=complex)
    out[0] = a
    for j in range(n_steps):
        k1 = -1j * (m @ a)
        k2 = -1j * (m @ (a + 0.5 * h * k1))
        k3 = -1j * (m @ (a + 0.5 * h * k2))
        k4 = -1j * (m @ (a + h * k3))
        a = a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(a)):
            raise PropagationError("non-finite amplitude", float(x[j + 1]))
        out[j + 1] = a
    return Trajectory(x_grid=x, amplitudes=out)


def two_level_analytic(coupling: float, span: float) -> tuple[float, float]:
    """Closed-form intensities (cos^2(C span), sin^2(C span)) of the
    constant-coupling two-channel system started in channel 1."""
    if span < 0:
        raise ValueError("span must be >= 0")
    phase = float(coupling) * float(span)
    return math.cos(phase) ** 2, math.sin(phase) ** 2


def dark_state(omega1: float, omega2: float) -> np.ndarray:
    """Zero-eigenvalue superposition (omega2, 0, -omega1)/sqrt(omega1^2+omega2^2)."""
    norm = math.hypot(omega1, omega2)
    if norm == 0.0:
        raise ValueError("dark state undefined when both couplings vanish")
    return np.array([omega2, 0.0, -omega1], dtype=complex) / norm


def field_map(trajectory: Trajectory, geom: DeviceGeometry, mode: SppMode,
              z_grid, x_stride: int = 1) -> np.ndarray:
    """|Psi(x, z)|^2 of the superposed sheet modes on the (x, z) grid.

    Sheet elevations: input at +d1(x), middle at 0, output at -d2(x). The
    common propagation phase cancels in the modulus; damping is carried by the
    amplitudes themselves, not repeated here. Returns an array of shape
    (len(x_grid[::x_stride]), len(z_grid)).
    """
    if x_stride < 1:
        raise ValueError("x_stride must be >= 1")
    z = np.asarray(z_grid, dtype=float)
    x = trajectory.x_grid[::x_stride]
    amps = trajectory.amplitudes[::x_stride]
    d1, d2 = sheet_separations(geom, x)
    elevations = np.stack([d1, np.zeros_like(x), -d2], axis=1)
    if z.min() > elevations.min() or z.max() < elevations.max():
        raise ValueError("z_grid must cover all three sheet elevations")
    psi = np.zeros((len(x), len(z)), dtype=complex)
    for i in range(3):
        dz = z[None, :] - elevations[:, i][:, None]
        k = np.where(dz >= 0, mode.k1, mode.k2)
        psi += amps[:, i][:, None] * np.exp(-k * np.abs(dz))
    psi /= mode.normalization
    return np.abs(psi) ** 2


def propagate_batch_three(h, omega1, omega2, a_init, alpha,
                          substeps: int = 1):
    """Vectorized three-channel integrator over a batch of devices.

    h: (B,) interval widths (uniform per device); omega1, omega2: (B, N)
    coupling tables; a_init: (B, 3); alpha: scalar or (B,) uniform loss.
    Returns the final (B, 3) amplitudes.
    """
    omega1 = np.asarray(omega1, dtype=float)
    omega2 = np.asarray(omega2, dtype=float)
    batch, knots = omega1.shape
    h = np.asarray(h, dtype=float) / substeps
    al = np.broadcast_to(np.asarray(alpha, dtype=float), (batch,))
    a0 = np.asarray(a_init[:, 0], dtype=complex).copy()
    a1 = np.asarray(a_init[:, 1], dtype=complex).copy()
    a2 = np.asarray(a_init[:, 2], dtype=complex).copy()

    for j in range(knots - 1):
        w1a = omega1[:, j]
        w1d = omega1[:, j + 1] - w1a
        w2a = omega2[:, j]
        w2d = omega2[:, j + 1] - w2a
        for s in range(substeps):
            u1_0 = w1a + w1d * (s / substeps)
            u2_0 = w2a + w2d * (s / substeps)
            u1_m = w1a + w1d * ((s + 0.5) / substeps)
            u2_m = w2a + w2d * ((s + 0.5) / substeps)
            u1_1 = w1a + w1d * ((s + 1.0) / substeps)
            u2_1 = w2a + w2d * ((s + 1.0) / substeps)

            k0 = -1j * u1_0 * a1 - al * a0
            k1 = -1j * (u1_0 * a0 + u2_0 * a2) - al * a1
            k2 = -1j * u2_0 * a1 - al * a2

            b0 = a0 + 0.5 * h * k0
            b1 = a1 + 0.5 * h * k1
            b2 = a2 + 0.5 * h * k2
            l0 = -1j * u1_m * b1 - al * b0
            l1 = -1j * (u1_m * b0 + u2_m * b2) - al * b1
            l2 = -1j * u2_m * b1 - al * b2

            b0 = a0 + 0.5 * h * l0
            b1 = a1 + 0.5 * h * l1
            b2 = a2 + 0.5 * h * l2
            m0 = -1j * u1_m * b1 - al * b0
            m1 = -1j * (u1_m * b0 + u2_m * b2) - al * b1
            m2 = -1j * u2_m * b1 - al * b2

            b0 = a0 + h * m0
            b1 = a1 + h * m1
            b2 = a2 + h * m2
            n0 = -1j * u1_1 * b1 - al * b0
            n1 = -1j * (u1_1 * b0 + u2_1 * b2) - al * b1
            n2 = -1j * u2_1 * b1 - al * b2

            a0 = a0 + h / 6.0 * (k0 + 2.0 * (l0 + m0) + n0)
            a1 = a1 + h / 6.0 * (k1 + 2.0 * (l1 + m1) + n1)
            a2 = a2 + h / 6.0 * (k2 + 2.0 * (l2 + m2) + n2)
    return np.stack([a0, a1, a2], axis=1)


def propagate_batch_two(coupling, span, alpha, n_steps: int):
    """Vectorized constant-coupling two-channel integrator.

    coupling, span, alpha: (B,) arrays; starts in channel 1, returns (B, 2).
    """
    c = np.asarray(coupling, dtype=float)
    h = np.asarray(span, dtype=float) / n_steps
    al = np.broadcast_to(np.asarray(alpha, dtype=float), c.shape)
    a0 = np.ones_like(c, dtype=complex)
    a1 = np.zeros_like(c, dtype=complex)
    for _ in range(n_steps):
        k0 = -1j * c * a1 - al * a0
        k1 = -1j * c * a0 - al * a1
        b0 = a0 + 0.5 * h * k0
        b1 = a1 + 0.5 * h * k1
        l0 = -1j * c * b1 - al * b0
        l1 = -1j * c * b0 - al * b1
        b0 = a0 + 0.5 * h * l0
        b1 = a1 + 0.5 * h * l1
        m0 = -1j * c * b1 - al * b0
        m1 = -1j * c * b0 - al * b1
        b0 = a0 + h * m0
        b1 = a1 + h * m1
        n0 = -1j * c * b1 - al * b0
        n1 = -1j * c * b0 - al * b1
        a0 = a0 + h / 6.0 * (k0 + 2.0 * (l0 + m0) + n0)
        a1 = a1 + h / 6.0 * (k1 + 2.0 * (l1 + m1) + n1)
    return np.stack([a0, a1], axis=1)
