"""Self-consistency report: computed values against published references.

The published device numbers are internally inconsistent: the wavevector
scale of the robustness maps (Re q = 35 1/um, attributed to lambda0 = 10 um)
does not follow from the stated Drude parameters, which give Re q near
139 1/um at that wavelength. Every reference comparison below therefore
reports the self-consistent value, the reference, and where they disagree, a
second evaluation at the reference wavevector scale obtained by frequency
inversion. This report is a first-class output: the `verify` subcommand
writes it next to the oracle-suite results.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import constants as _const

from . import oracles
from .config import RunConfig, config_hash
from .coupling import coupling_coefficient, overlap_integral
from .dispersion import (INFINITE_PROPAGATION, confinement_length,
                         propagation_length)
from .dynamics import (AmplitudeState, ChainHamiltonian, propagate,
                       propagate_constant, two_level_analytic)
from .experiments import (mode_at_wavevector, run_device,
                          stirap_stretch_search)
from .geometry import build_schedule
from .materials import default_relaxation_rate, drude_conductivity

VERSION = "0.1.0"

# Published reference values the implementation is compared against.
REFERENCE_VALUES = {
    "relaxation_rate_per_s": 1.11e12,
    "propagation_length_um": 4.092,
    "coupling_abs_per_um": 24.0,
    "confinement_nm": 23.0,
    "Re_q_per_um": 35.0,
}
REFERENCE_WAVEVECTOR_PER_UM = 35.0
LOSSY_PAPER_BAND = (0.6, 0.9)
LOSSY_ACCEPTANCE_BAND = (0.4, 1.0)


def _comparison(name: str, computed: float, reference: float, unit: str,
                note: str) -> dict:
    deviation = abs(computed - reference) / abs(reference)
    return {
        "name": name,
        "computed": computed,
        "reference": reference,
        "unit": unit,
        "relative_deviation": deviation,
        "within_15_percent": bool(deviation <= 0.15),
        "note": note,
    }


def build_validation_report(config: RunConfig,
                            include_oracles: bool = False,
                            seed: int = 0) -> dict:
    """Assemble the full comparison/discrepancy report as a JSON-ready dict."""
    sheet = config.sheet()
    mode = config.solve_mode()
    gamma_no_two_pi = default_relaxation_rate(sheet, "no_two_pi")
    gamma_literal = default_relaxation_rate(sheet, "literal_two_pi")

    lx = propagation_length(mode)
    lx_um = math.inf if lx == INFINITE_PROPAGATION else lx * 1e6
    confinement_nm = confinement_length(mode) * 1e9
    d_min = config.d_min_nm * 1e-9
    pair_vacuum = coupling_coefficient(mode, d_min, "vacuum")
    pair_film = coupling_coefficient(mode, d_min, "film")

    # The same quantities evaluated at the reference wavevector scale.
    paper_mode = mode_at_wavevector(config,
                                    REFERENCE_WAVEVECTOR_PER_UM * 1e6)
    paper_pair = coupling_coefficient(paper_mode, d_min, "vacuum")
    paper_lambda0_um = (2 * math.pi * _const.c
                        / paper_mode.excitation.angular_frequency * 1e6)
    paper_lx = propagation_length(paper_mode)

    comparisons = [
        _comparison(
            "relaxation_rate", gamma_no_two_pi,
            REFERENCE_VALUES["relaxation_rate_per_s"], "1/s",
            "mobility-derived rate, e v_F^2 / (mu E_F) without the 2 pi "
            "factor; the alternative convention gives "
            f"{gamma_literal:.4g} 1/s"),
        _comparison(
            "propagation_length", lx_um,
            REFERENCE_VALUES["propagation_length_um"], "um",
            "L_x = 1/(2 Im q) at the configured excitation; at the reference "
            f"wavevector scale (Re q = 35 1/um) it is {paper_lx * 1e6:.4g} um"),
        _comparison(
            "coupling_strength", abs(pair_vacuum.c12) * 1e-6,
            REFERENCE_VALUES["coupling_abs_per_um"], "1/um",
            "|C| at the minimum gap, vacuum k0 convention; at the reference "
            f"wavevector scale it is {abs(paper_pair.c12) * 1e-6:.4g} 1/um; "
            "both sit on the published order of magnitude, unlike the film "
            "convention"),
        _comparison(
            "confinement_length", confinement_nm,
            REFERENCE_VALUES["confinement_nm"], "nm",
            "1/Re k at the configured excitation; at the reference wavevector "
            f"scale it is {confinement_length(paper_mode) * 1e9:.4g} nm"),
        _comparison(
            "propagation_constant", mode.q.real * 1e-6,
            REFERENCE_VALUES["Re_q_per_um"], "1/um",
            "self-consistent Re q at lambda0 = "
            f"{config.lambda0_um:g} um; the reference scale corresponds to "
            f"lambda0 = {paper_lambda0_um:.4g} um instead"),
    ]

    lossless = run_device(config, lossy=False)
    lossy = run_device(config, lossy=True)
    lossless_final = lossless.trajectory.final_intensities
    norm_defect = abs(float(lossless_final.sum()) - 1.0)

    stretch_default = stirap_stretch_search(config)
    stretch_paper = stirap_stretch_search(config, mode=paper_mode)

    lossy_output = float(lossy.trajectory.final_intensities[2])
    report = {
        "config_hash": config_hash(config),
        "version": VERSION,
        "comparisons": comparisons,
        "coupling_conventions": {
            "vacuum_abs_per_um": abs(pair_vacuum.c12) * 1e-6,
            "film_abs_per_um": abs(pair_film.c12) * 1e-6,
            "note": "the film convention subtracts the graphene thin-film "
                    "permittivity inside k0^2 and yields couplings two "
                    "orders of magnitude below the published curve; the "
                    "vacuum convention is the default",
        },
        "gamma_conventions": {
            "no_two_pi_per_s": gamma_no_two_pi,
            "literal_two_pi_per_s": gamma_literal,
        },
        "wavevector_consistency": {
            "Re_q_at_configured_lambda0_per_um": mode.q.real * 1e-6,
            "configured_lambda0_um": config.lambda0_um,
            "lambda0_at_reference_wavevector_um": paper_lambda0_um,
            "reference_wavevector_per_um": REFERENCE_WAVEVECTOR_PER_UM,
            "note": "the stated wavelength and wavevector scale cannot both "
                    "hold under the stated Drude parameters; figures keyed "
                    "to the wavevector use the inverted frequency",
        },
        "stirap_default": {
            "lossless_final_intensities": [float(v) for v in lossless_final],
            "norm_defect": norm_defect,
            "lossy_final_intensities": [
                float(v) for v in lossy.trajectory.final_intensities],
        },
        "stretch_search": {
            "target": stretch_default.target,
            "stretch": stretch_default.stretch,
            "best_stretch": stretch_default.best_stretch,
            "best_output": stretch_default.best_output,
            "note": "uniform stretch of (L, R, offset) at the configured "
                    "excitation; the centre gap grows with the stretch, so "
                    "the transfer degrades monotonically at this wavevector "
                    "scale",
            "at_reference_wavevector": {
                "stretch": stretch_paper.stretch,
                "best_stretch": stretch_paper.best_stretch,
                "best_output": stretch_paper.best_output,
            },
        },
        "lossy_default": {
            "I_output": lossy_output,
            "acceptance_band": list(LOSSY_ACCEPTANCE_BAND),
            "paper_band": list(LOSSY_PAPER_BAND),
            "within_acceptance_band": bool(
                LOSSY_ACCEPTANCE_BAND[0] <= lossy_output
                <= LOSSY_ACCEPTANCE_BAND[1]),
            "within_paper_band": bool(
                LOSSY_PAPER_BAND[0] <= lossy_output <= LOSSY_PAPER_BAND[1]),
            "note": "uniform alpha = Im q at the configured excitation damps "
                    "the device by exp(-2 Im q L) before any transfer "
                    "physics; the band is only reachable at the reference "
                    "wavevector scale",
        },
    }
    if include_oracles:
        report["oracle_suite"] = run_oracle_suite(config, seed=seed)
    return report


def run_oracle_suite(config: RunConfig, seed: int = 0) -> dict:
    """Exercise every oracle against the production code paths.

    Returns per-check maximum errors and pass flags; raises OracleFailure if
    an oracle cannot produce a trustworthy reference.
    """
    rng = np.random.default_rng(seed)

    tight = oracles.QuadratureSpec(absolute_tolerance=1e-300,
                                   relative_tolerance=1e-11,
                                   max_subdivisions=65536)
    overlap_max = 0.0
    for _ in range(100):
        k_a = complex(rng.uniform(0.2, 3.0) * 1e8,
                      rng.uniform(-0.3, 0.3) * 1e8)
        k_b = complex(rng.uniform(0.2, 3.0) * 1e8,
                      rng.uniform(-0.3, 0.3) * 1e8)
        d = rng.uniform(1.0, 100.0) * 1e-9
        closed = complex(overlap_integral(k_a, k_b, d))
        reference = oracles.overlap_quadrature(k_a, k_b, d, tight)
        overlap_max = max(overlap_max,
                          abs(closed - reference) / abs(reference))

    residual_max = 0.0
    for _ in range(60):
        lam = rng.uniform(5.0, 15.0)
        fermi = rng.uniform(0.05, 0.3)
        gamma = float(rng.choice([0.0, 2e12]))
        trial = RunConfig(lambda0_um=lam, E_F_eV=fermi, gamma_per_s=gamma)
        mode = trial.solve_mode()
        sigma = drude_conductivity(mode.excitation.angular_frequency,
                                   trial.sheet(), gamma)
        residual_max = max(residual_max,
                           oracles.dispersion_residual(mode, sigma))

    two_level_max = 0.0
    expm_max = 0.0
    for _ in range(25):
        strength = rng.uniform(0.5, 40.0) * 1e6
        span = rng.uniform(0.1, 20.0 * math.pi) / strength
        ham = ChainHamiltonian((strength,))
        final = propagate_constant(ham, np.array([1.0, 0.0], dtype=complex),
                                   span=span).amplitudes[-1]
        exact = two_level_analytic(strength, span)
        two_level_max = max(two_level_max,
                            abs(abs(final[0]) ** 2 - exact[0]),
                            abs(abs(final[1]) ** 2 - exact[1]))
        # The eigen-decomposition oracle is held to the closed form, which
        # is far tighter than the integrator's own truncation error.
        reference = oracles.expm_reference(ham, [1.0, 0.0], span)
        phase = strength * span
        analytic = np.array([math.cos(phase), -1j * math.sin(phase)])
        expm_max = max(expm_max, float(np.abs(reference - analytic).max()))

    mode = config.solve_mode()
    start_vec = np.array([1.0, 0.0, 0.0], dtype=complex)
    staircase_errors = []
    for knots in (1025, 2049):
        schedule = build_schedule(config.geometry(), mode, knots,
                                  config.k0_convention)
        start = AmplitudeState(start_vec, position=float(schedule.x_grid[0]))
        integrated = propagate(schedule, start).amplitudes[-1]
        staircase = oracles.staircase_evolution(
            schedule.x_grid, schedule.omega1, schedule.omega2, start_vec)
        staircase_errors.append(float(np.abs(integrated - staircase).max()))
    staircase_max = staircase_errors[0]
    # Second-order reference: doubling the grid must cut the gap about 4x.
    staircase_order_ok = staircase_errors[1] < 0.5 * staircase_errors[0]

    return {
        "seed": seed,
        "overlap_vs_quadrature_max_relative": overlap_max,
        "overlap_pass": bool(overlap_max < 1e-8),
        "dispersion_residual_max": residual_max,
        "dispersion_pass": bool(residual_max < 1e-10),
        "two_level_vs_analytic_max": two_level_max,
        "two_level_pass": bool(two_level_max < 1e-6),
        "expm_vs_analytic_max": expm_max,
        "expm_pass": bool(expm_max < 1e-10),
        "staircase_vs_integrator_max": staircase_max,
        "staircase_vs_integrator_refined": staircase_errors[1],
        "staircase_pass": bool(staircase_max < 2e-5 and staircase_order_ok),
    }


def render_validation_text(report: dict) -> str:
    """Human-readable rendering of the validation report."""
    lines = []
    lines.append("validation report")
    lines.append(f"config hash: {report['config_hash']}")
    lines.append("")
    lines.append("reference comparisons (within 15% or documented):")
    for entry in report["comparisons"]:
        flag = "ok " if entry["within_15_percent"] else "DOC"
        lines.append(
            f"  [{flag}] {entry['name']}: computed {entry['computed']:.6g} "
            f"{entry['unit']} vs reference {entry['reference']:.6g} "
            f"{entry['unit']} (deviation {entry['relative_deviation']:.1%})")
        lines.append(f"        {entry['note']}")
    wv = report["wavevector_consistency"]
    lines.append("")
    lines.append(
        f"wavevector consistency: Re q = "
        f"{wv['Re_q_at_configured_lambda0_per_um']:.4g} 1/um at lambda0 = "
        f"{wv['configured_lambda0_um']:g} um; the reference scale "
        f"{wv['reference_wavevector_per_um']:g} 1/um corresponds to "
        f"lambda0 = {wv['lambda0_at_reference_wavevector_um']:.4g} um")
    st = report["stirap_default"]
    lines.append("")
    lines.append("default device, lossless final intensities "
                 "(input, middle, output): "
                 + ", ".join(f"{v:.4f}"
                             for v in st["lossless_final_intensities"]))
    lines.append(f"norm defect: {st['norm_defect']:.3e}")
    ss = report["stretch_search"]
    found = ("none within reach" if ss["stretch"] is None
             else f"s = {ss['stretch']:.2f}")
    lines.append(
        f"stretch search (target {ss['target']:g}): {found}; best scanned "
        f"s = {ss['best_stretch']:.2f} with output {ss['best_output']:.4f}")
    ref = ss["at_reference_wavevector"]
    ref_found = ("none within reach" if ref["stretch"] is None
                 else f"s = {ref['stretch']:.2f}")
    lines.append(f"  at the reference wavevector scale: {ref_found} "
                 f"(best output {ref['best_output']:.4f})")
    lo = report["lossy_default"]
    lines.append("")
    lines.append(
        f"lossy default output intensity: {lo['I_output']:.6g} "
        f"(acceptance band {lo['acceptance_band']}, within: "
        f"{lo['within_acceptance_band']}; published band {lo['paper_band']}, "
        f"within: {lo['within_paper_band']})")
    if "oracle_suite" in report:
        suite = report["oracle_suite"]
        lines.append("")
        lines.append(f"oracle suite (seed {suite['seed']}):")
        for key in ("overlap", "dispersion", "two_level", "expm",
                    "staircase"):
            passed = suite[f"{key}_pass"]
            metric = [k for k in suite if k.startswith(key) and
                      not k.endswith("_pass")][0]
            status = "pass" if passed else "FAIL"
            lines.append(f"  [{status}] {key}: max error "
                         f"{suite[metric]:.3e}")
    lines.append("")
    return "\n".join(lines)
