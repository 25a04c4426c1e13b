"""Command-line front end: ``qubit-hologram {pt-scan,scatter,bound,dirac-check}``.

Exit codes: 0 success, 2 invalid configuration or data, 3 numerical
failure, 4 no interior minimum in the bound-state bracket.
"""

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .bound_state import (
    bloch_components,
    evolve_trial,
    find_bound_state,
    scan_energies,
    turning_points,
)
from .config import (
    BoundConfig,
    DiracCheckConfig,
    PTScanConfig,
    RunConfig,
    ScatterConfig,
    build_section,
    load_run_config,
    resolve_output_dir,
)
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .dirac import identity_sweep
from .errors import (
    ChannelSolveError,
    ConfigError,
    DataError,
    DomainError,
    EnergyScanError,
    IllConditionedRadiiError,
    IntegrationError,
    NoInteriorMinimumError,
    PotentialError,
)
from .logging import get_logger, setup_logger
from .potential import (
    OpticalModel,
    Potential,
    evaluate_potential,
    load_potential,
    spin_orbit_expectation,
)
from .pt_core import EffectiveParams, classify_pt
from .records import (
    AngularRecord,
    PhaseShiftRecord,
    PotentialRecord,
    PTScanRecord,
    RadialRecord,
    ScanRecord,
    TrajectoryRecord,
    TrialRecord,
    read_data_points,
    write_csv,
)
from .scattering import (
    PhaseShiftTable,
    SolverSettings,
    channels_up_to,
    compare_to_data,
    make_channel,
    partial_wave_cross_sections,
    phase_shift_table,
    scattering_amplitudes,
    solve_radial,
    total_cross_sections,
)

__all__ = ["main", "run_pt_scan", "run_scatter", "run_bound", "run_dirac_check"]

logger = get_logger("cli")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NO_MINIMUM = 4

# 1 fm² = 10 mb
FM2_TO_MB = 10.0


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_pt_scan(
    omega_range: tuple[float, float],
    mass: float,
    steps: int,
    stream: TextIO,
    tol: float = 1e-9,
) -> list[PTScanRecord]:
    """Classify H_eff on a uniform ω grid and write one CSV row per ω.

    Raises:
        ConfigError: ``steps`` < 2 or an invalid range or mass.
    """
    config = build_section(
        PTScanConfig,
        None,
        {"omega_min": omega_range[0], "omega_max": omega_range[1], "mass": mass, "steps": steps, "tol": tol},
    )
    rows = []
    for omega in np.linspace(config.omega_min, config.omega_max, config.steps):
        result = classify_pt(EffectiveParams(omega=float(omega), mass=config.mass), config.tol)
        k_plus, k_minus = result.eigenmomenta
        rows.append(
            PTScanRecord(
                omega=float(omega),
                k_plus_re=k_plus.real,
                k_plus_im=k_plus.imag,
                k_minus_re=k_minus.real,
                k_minus_im=k_minus.imag,
                phase=result.phase.value,
            )
        )
    write_csv(PTScanRecord, rows, stream, comments=[f"m = {config.mass!r}"])
    return rows


def _potential_rows(
    spec: Potential, config: ScatterConfig, constants: PhysicalConstants
) -> list[PotentialRecord]:
    rows = []
    for l, j in channels_up_to(min(config.l_max, config.potential_l_max)):
        ls = spin_orbit_expectation(l, j)
        for r in config.radial_grid():
            central = spec.central(float(r), config.energy)
            spin_orbit = ls * spec.spin_orbit(float(r), config.energy, constants) if ls else 0j
            total = evaluate_potential(spec, l, j, float(r), config.energy, constants)
            rows.append(
                PotentialRecord(
                    r_fm=float(r),
                    l=l,
                    j=float(j),
                    re_central=central.real,
                    im_central=central.imag,
                    re_spin_orbit=spin_orbit.real,
                    im_spin_orbit=spin_orbit.imag,
                    re_v=total.real,
                    im_v=total.imag,
                )
            )
    return rows


def run_scatter(
    config: ScatterConfig,
    output_dir: Path,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> dict[str, Any]:
    """Phase shifts, angular distribution and cross sections for one energy.

    Writes ``phase_shifts.csv``, ``angular.csv``, ``radial_l0.csv``,
    ``potential.csv``, ``summary.json`` and, when data is configured,
    ``chi2.json``.

    Returns:
        The summary written to ``summary.json``.
    """
    spec = load_potential(config.potential)
    data = read_data_points(config.data) if config.data is not None else None
    settings = SolverSettings(
        r_start=config.r_start,
        r1=config.r1,
        r2=config.r2,
        v=config.v,
        tolerance=config.tolerance,
    )

    def table_up_to(l_max: int) -> PhaseShiftTable:
        return phase_shift_table(
            spec,
            config.energy,
            l_max=l_max,
            settings=settings,
            constants=constants,
            reduced_mass=config.reduced_mass,
            target_mass_number=config.target_mass_number,
            max_workers=config.max_workers,
        )

    table = table_up_to(config.l_max)
    theta_deg = config.theta_grid_deg()
    dist = scattering_amplitudes(table, np.radians(theta_deg))
    sigma_el, sigma_tot = total_cross_sections(table)
    partial = partial_wave_cross_sections(table)

    output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        PhaseShiftRecord,
        [
            PhaseShiftRecord(l=l, j=float(j), re_delta=d.real, im_delta=d.imag)
            for (l, j), d in table.entries.items()
        ],
        output_dir / "phase_shifts.csv",
    )
    write_csv(
        AngularRecord,
        [
            AngularRecord(
                theta_deg=float(t),
                re_f=f.real,
                im_f=f.imag,
                re_g=g.real,
                im_g=g.imag,
                dsigma_dOmega_mb_per_sr=s * FM2_TO_MB,
            )
            for t, f, g, s in zip(theta_deg, dist.f, dist.g, dist.dsigma_domega)
        ],
        output_dir / "angular.csv",
    )

    target_a = config.target_mass_number
    if target_a is None and isinstance(spec, OpticalModel):
        target_a = spec.target_mass_number
    channel = make_channel(
        0, 0.5, config.energy, None, constants, config.reduced_mass, target_a
    )
    radial = solve_radial(
        channel,
        spec,
        r_start=settings.r_start,
        r_end=settings.r2,
        v=settings.v,
        tolerance=settings.tolerance,
        sample_rs=config.radial_grid(),
        constants=constants,
    )
    # interior samples only: the endpoints r_start and r2 are off the uniform grid
    bloch = bloch_components(radial.qubit_states())[1:-1]
    write_csv(
        RadialRecord,
        [
            RadialRecord(
                r_fm=float(r),
                re_u=u.real,
                im_u=u.imag,
                re_du=du.real,
                im_du=du.imag,
                sigma_x=b[0],
                sigma_y=b[1],
                sigma_z=b[2],
            )
            for (r, u, du), b in zip(radial.samples[1:-1], bloch)
        ],
        output_dir / "radial_l0.csv",
        comments=[f"channel {channel.label}, E = {config.energy!r} MeV"],
    )
    write_csv(
        PotentialRecord,
        _potential_rows(spec, config, constants),
        output_dir / "potential.csv",
        comments=[f"E = {config.energy!r} MeV"],
    )

    sensitivity: dict[str, Any] | None = None
    if config.lmax_extra > 0:
        extended_el, _ = total_cross_sections(table_up_to(config.l_max + config.lmax_extra))
        sensitivity = {
            "l_max": config.l_max + config.lmax_extra,
            "sigma_elastic_mb": extended_el * FM2_TO_MB,
            "relative_change": (extended_el - sigma_el) / sigma_el if sigma_el > 0.0 else 0.0,
        }

    summary: dict[str, Any] = {
        "inputs": {
            **config.model_dump(mode="json"),
            "potential_document": spec.model_dump(mode="json", by_alias=True),
        },
        "constants": constants.model_dump(),
        "k_fm_inv": table.k,
        "sigma_elastic_mb": sigma_el * FM2_TO_MB,
        "sigma_total_mb": sigma_tot * FM2_TO_MB,
        "sigma_reaction_mb": (sigma_tot - sigma_el) * FM2_TO_MB,
        "partial_wave_sums": {
            "sigma_elastic_mb": partial.elastic * FM2_TO_MB,
            "sigma_total_mb": partial.total * FM2_TO_MB,
            "sigma_reaction_mb": partial.reaction * FM2_TO_MB,
        },
        "lmax_sensitivity": sensitivity,
        "forward_peaked": dist.forward_peaked,
        "gain_channels": list(table.gain_channels),
    }

    if data is not None:
        rows = [
            (math.radians(p.theta_deg), p.value_mb_per_sr / FM2_TO_MB, p.uncertainty / FM2_TO_MB)
            for p in data
        ]
        chi = compare_to_data(dist, rows)
        _write_json(
            output_dir / "chi2.json",
            {
                "chi2": chi.chi2,
                "points": chi.points,
                "chi2_per_point": chi.chi2 / chi.points,
                "residuals": [
                    {"theta_deg": p.theta_deg, "normalized_residual": float(r)}
                    for p, r in zip(data, chi.residuals)
                ],
            },
        )
        summary["chi2"] = chi.chi2
    _write_json(output_dir / "summary.json", summary)
    logger.info(
        "scatter: sigma_el = %.6g mb, sigma_tot = %.6g mb", sigma_el * FM2_TO_MB, sigma_tot * FM2_TO_MB
    )
    return summary


def run_bound(
    config: BoundConfig, output_dir: Path, stream: TextIO | None = None
) -> dict[str, Any]:
    """Energy scan, zero-mode search and the trajectory at the located energy.

    Writes ``scan.csv``, ``trajectory.csv``, ``trials.csv`` (Bloch components
    at every configured trial energy) and ``result.json`` and prints E_star on
    ``stream``.

    Raises:
        NoInteriorMinimumError: The bracket holds no minimum of the amplitude.
    """
    stream = sys.stdout if stream is None else stream
    profile = config.profile
    window = (config.x0, config.x1)
    scan = scan_energies(
        profile, config.energy_grid(), *window, config.tolerance, config.max_workers
    )
    output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        ScanRecord,
        [ScanRecord(energy=e, final_amplitude=a) for e, a in scan.entries],
        output_dir / "scan.csv",
    )

    e_star = find_bound_state(
        profile,
        config.bracket,
        config.tol_e,
        *window,
        config.tolerance,
        scan_points=config.scan_points,
        max_workers=config.max_workers,
    )
    trial = evolve_trial(e_star, profile, *window, config.tolerance, sample_xs=config.trajectory_grid())
    states = trial.trajectory.states
    bloch = bloch_components(states)
    write_csv(
        TrajectoryRecord,
        [
            TrajectoryRecord(
                x=float(x),
                re_alpha=s[0].real,
                im_alpha=s[0].imag,
                re_beta=s[1].real,
                im_beta=s[1].imag,
                sigma_x=b[0],
                sigma_y=b[1],
                sigma_z=b[2],
                norm=float(np.linalg.norm(s)),
            )
            for x, s, b in zip(trial.trajectory.times, states, bloch)
        ],
        output_dir / "trajectory.csv",
        comments=[f"E = {e_star!r}"],
    )

    trial_rows: list[TrialRecord] = []
    for energy in config.trial_energies:
        path = evolve_trial(
            energy, profile, *window, config.tolerance, sample_xs=config.trajectory_grid()
        ).trajectory
        trial_rows += [
            TrialRecord(
                energy=energy,
                x=float(x),
                sigma_x=b[0],
                sigma_y=b[1],
                sigma_z=b[2],
                norm=float(np.linalg.norm(s)),
            )
            for x, s, b in zip(path.times, path.states, bloch_components(path.states))
        ]
    write_csv(TrialRecord, trial_rows, output_dir / "trials.csv")

    result = {
        "E_star": e_star,
        "final_amplitude": trial.final_amplitude,
        "turning_points": turning_points(e_star, profile, window),
        "window": list(window),
        "bracket": list(config.bracket),
        "tol_e": config.tol_e,
        "tolerance": config.tolerance,
        "scan_points": config.scan_points,
        "trial_energies": list(config.trial_energies),
        "profile": profile.model_dump(mode="json"),
        "scan": {
            "e_min": config.e_min,
            "e_max": config.e_max,
            "e_step": config.e_step,
            "points": int(scan.energies.size),
            "interior_minima": [float(scan.energies[i]) for i in scan.interior_minima()],
        },
    }
    _write_json(output_dir / "result.json", result)
    stream.write(f"E_star = {e_star!r}\n")
    return result


def run_dirac_check(
    seed: int = 42, draws: int = 1000, threshold: float = 1e-12, stream: TextIO | None = None
) -> int:
    """Print the largest identity residuals of a seeded sweep; return the exit code."""
    stream = sys.stdout if stream is None else stream
    config = build_section(DiracCheckConfig, None, {"seed": seed, "draws": draws, "threshold": threshold})
    sweep = identity_sweep(config.seed, config.draws)
    passed = sweep.passed(config.threshold)
    for line in sweep.report_lines():
        stream.write(line + "\n")
    stream.write(f"threshold: {config.threshold:.6e}\n")
    stream.write(f"status: {'pass' if passed else 'fail'}\n")
    return EXIT_OK if passed else EXIT_NUMERICAL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubit-hologram",
        description="Spatial eigenvalue problems solved as non-Hermitian qubit evolution.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="INFO logging; repeat for DEBUG")
    parser.add_argument("--log-file", type=str, help="Write the log to this file instead of stderr")
    parser.add_argument("--output-dir", type=str, help="Directory for output files")
    parser.add_argument("--config", type=Path, help="Run document (.toml or .json)")
    sub = parser.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("pt-scan", help="PT phase of H_eff over a range of omega")
    pt.add_argument("--omega-min", type=float)
    pt.add_argument("--omega-max", type=float)
    pt.add_argument("--mass", type=float)
    pt.add_argument("--steps", type=int)
    pt.add_argument("--tol", type=float)
    pt.add_argument("--output", type=Path, help="CSV file; standard output when omitted")

    sc = sub.add_parser("scatter", help="Neutron phase shifts and cross sections")
    sc.add_argument("--potential", type=Path, help="Potential document")
    sc.add_argument("--energy", type=float, help="Laboratory energy in MeV")
    sc.add_argument("--l-max", dest="l_max", type=int)
    sc.add_argument("--r-start", dest="r_start", type=float)
    sc.add_argument("--r1", type=float)
    sc.add_argument("--r2", type=float)
    sc.add_argument("--speed", dest="v", type=float, help="Evolution speed v, r = v t")
    sc.add_argument("--tolerance", type=float)
    sc.add_argument("--theta-min", dest="theta_min_deg", type=float)
    sc.add_argument("--theta-max", dest="theta_max_deg", type=float)
    sc.add_argument("--theta-step", dest="theta_step_deg", type=float)
    sc.add_argument("--radial-step", dest="radial_step", type=float)
    sc.add_argument("--data", type=Path, help="Measured cross sections (theta_deg, mb/sr, uncertainty)")
    sc.add_argument("--reduced-mass", dest="reduced_mass", action="store_true", default=None)
    sc.add_argument("--target-mass-number", dest="target_mass_number", type=int)
    sc.add_argument("--max-workers", dest="max_workers", type=int)
    sc.add_argument("--lmax-extra", dest="lmax_extra", type=int)
    sc.add_argument("--potential-l-max", dest="potential_l_max", type=int, help="Channels in potential.csv")
    sc.add_argument("--hbar-c", dest="hbar_c", type=float, help="Override hbar*c in MeV fm")
    sc.add_argument("--neutron-mass", dest="neutron_mass", type=float, help="Override the neutron mass in MeV")

    bd = sub.add_parser("bound", help="Zero mode of a mass domain wall")
    bd.add_argument("--profile", choices=["tanh", "constant"])
    bd.add_argument("--amplitude", type=float)
    bd.add_argument("--center", type=float)
    bd.add_argument("--width", type=float)
    bd.add_argument("--value", type=float, help="Mass of the constant profile")
    bd.add_argument("--x0", type=float)
    bd.add_argument("--x1", type=float)
    bd.add_argument("--tolerance", type=float)
    bd.add_argument("--tol-e", dest="tol_e", type=float)
    bd.add_argument("--bracket", type=float, nargs=2, metavar=("E_LO", "E_HI"))
    bd.add_argument("--e-min", dest="e_min", type=float)
    bd.add_argument("--e-max", dest="e_max", type=float)
    bd.add_argument("--e-step", dest="e_step", type=float)
    bd.add_argument("--trajectory-points", dest="trajectory_points", type=int)
    bd.add_argument("--scan-points", dest="scan_points", type=int, help="Coarse scan of the bracket")
    bd.add_argument("--trial-energies", dest="trial_energies", type=float, nargs="+")
    bd.add_argument("--max-workers", dest="max_workers", type=int)

    dc = sub.add_parser("dirac-check", help="Residuals of the Dirac symmetry identities")
    dc.add_argument("--seed", type=int)
    dc.add_argument("--draws", type=int)
    dc.add_argument("--threshold", type=float)
    return parser


def _profile_overrides(args: argparse.Namespace, document: dict[str, Any] | None) -> dict[str, Any] | None:
    flags = {
        "amplitude": args.amplitude,
        "center": args.center,
        "width": args.width,
        "value": args.value,
    }
    flags = {k: v for k, v in flags.items() if v is not None}
    if args.profile is None and not flags:
        return None
    profile = dict((document or {}).get("profile") or {})
    if args.profile is not None and args.profile != profile.get("kind", "tanh"):
        profile = {}
    profile["kind"] = args.profile or profile.get("kind", "tanh")
    profile.update(flags)
    return profile


def _configure_logging(verbose: int, log_file: str | None) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    setup_logger("qubit_hologram", level=level, filename=log_file)


def _dispatch(args: argparse.Namespace) -> int:
    run = load_run_config(args.config) if args.config is not None else RunConfig()
    output_dir = resolve_output_dir(args.output_dir, run)

    if args.command == "pt-scan":
        config = build_section(
            PTScanConfig,
            run.pt_scan,
            {
                "omega_min": args.omega_min,
                "omega_max": args.omega_max,
                "mass": args.mass,
                "steps": args.steps,
                "tol": args.tol,
                "output": args.output,
            },
        )
        omega_range = (config.omega_min, config.omega_max)
        if config.output is None:
            run_pt_scan(omega_range, config.mass, config.steps, sys.stdout, config.tol)
        else:
            config.output.parent.mkdir(parents=True, exist_ok=True)
            with config.output.open("w", newline="") as fh:
                run_pt_scan(omega_range, config.mass, config.steps, fh, config.tol)
        return EXIT_OK

    if args.command == "scatter":
        overrides = {
            key: getattr(args, key)
            for key in ScatterConfig.model_fields
            if hasattr(args, key)
        }
        scatter = build_section(ScatterConfig, run.scatter, overrides)
        constants = DEFAULT_CONSTANTS.with_overrides(run.constants).with_overrides(
            {"hbar_c": args.hbar_c, "neutron_mass": args.neutron_mass}
        )
        run_scatter(scatter, output_dir, constants)
        return EXIT_OK

    if args.command == "bound":
        overrides = {
            key: getattr(args, key)
            for key in BoundConfig.model_fields
            if key != "profile" and hasattr(args, key)
        }
        overrides["bracket"] = tuple(args.bracket) if args.bracket is not None else None
        if args.trial_energies is not None:
            overrides["trial_energies"] = tuple(args.trial_energies)
        overrides["profile"] = _profile_overrides(args, run.bound)
        bound = build_section(BoundConfig, run.bound, overrides)
        run_bound(bound, output_dir)
        return EXIT_OK

    dirac = build_section(
        DiracCheckConfig,
        run.dirac_check,
        {"seed": args.seed, "draws": args.draws, "threshold": args.threshold},
    )
    return run_dirac_check(dirac.seed, dirac.draws, dirac.threshold)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``qubit-hologram`` command."""
    args = _build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.log_file)
    try:
        return _dispatch(args)
    except NoInteriorMinimumError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_MINIMUM
    except (ConfigError, DataError, DomainError) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        IntegrationError,
        IllConditionedRadiiError,
        ChannelSolveError,
        EnergyScanError,
        PotentialError,
    ) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
