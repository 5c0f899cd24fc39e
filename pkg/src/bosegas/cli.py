"""Command-line front end.

Subcommands: scatter, bounds, gp, tf, ll, regimes, charged, verify, validate.
Scalar results go to JSON (ResultRecord), curves and profiles to CSV.  All
outputs are deterministic for a fixed (config, seed); the only run-dependent
field is the timestamp.  Exit codes: 0 ok, 1 numeric failure, 2 config
error, 3 IO error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys

from . import SCHEMA_VERSION, __version__
from . import charged, homogeneous, meanfield, onedim, scattering, verify
from .config import (ConfigError, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK,
                     ResultRecord, SweepSpec, parse_config_file,
                     validate_params, write_csv)


class NumericError(RuntimeError):
    pass


def _provenance(**extra) -> dict:
    out = {"package_version": __version__, "schema_version": SCHEMA_VERSION}
    out.update(extra)
    return out


def _emit_record(args, record: ResultRecord) -> None:
    text = record.to_json()
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- subcommand implementations -------------------------------------------

def _potential_from_args(args) -> scattering.RadialPotential:
    if args.kind == "hard_core":
        return scattering.hard_core(args.R0, args.dim)
    if args.kind == "soft_sphere":
        if args.v0 is None:
            raise ConfigError("soft_sphere needs --v0")
        return scattering.soft_sphere(args.R0, args.v0, args.dim)
    if args.potential_file is None:
        raise ConfigError("tabulated potential needs --potential-file")
    return scattering.load_potential(args.potential_file)


def cmd_scatter(args) -> int:
    v = _potential_from_args(args)
    sol = scattering.solve_zero_energy(v, args.mu,
                                       scattering.GridSpec(args.n_grid))
    outputs = {"a": sol.a, "a_refined": sol.a_refined,
               "dimension": sol.dimension}
    if sol.dimension == 3 and sol.a > 0:
        outputs["s"] = sol.s
        outputs["identity_residuals"] = {
            str(R): scattering.energy_identity_residual(sol, v, R * v.core_radius)["residual"]
            for R in (2, 4, 8)} if v.core_radius > 0 else {}
    if args.profile_out:
        sol.export_csv(args.profile_out)
    rec = ResultRecord("scatter", _args_echo(args), outputs,
                       _provenance(n_grid=args.n_grid))
    _emit_record(args, rec)
    return EXIT_OK


def _bounds_row(Y: float, mu: float) -> tuple:
    rho = 3.0 * Y / (4.0 * math.pi)   # a = 1 parametrization of the sweep
    st = homogeneous.GasState3D(rho, 1.0, mu)
    return (Y, homogeneous.lower_bound_3d(st).value,
            homogeneous.lhy_reference(st), homogeneous.upper_bound_3d(st))


def cmd_bounds(args) -> int:
    if args.sweep:
        spec = SweepSpec.parse(args.sweep)
        vals = spec.values()
        if args.workers > 1:
            with concurrent.futures.ThreadPoolExecutor(args.workers) as pool:
                rows = list(pool.map(lambda y: _bounds_row(y, args.mu), vals))
        else:
            rows = [_bounds_row(y, args.mu) for y in vals]
        path = args.out or "bounds.csv"
        write_csv(path, ["Y", "lower", "lhy", "upper"], rows)
        return EXIT_OK
    if args.dim == 3:
        st = homogeneous.GasState3D(args.rho, args.a, args.mu)
        lb = homogeneous.lower_bound_3d(st)
        outputs = {"Y": st.Y, "lower": lb.value, "lower_clamped": lb.clamped,
                   "lhy": homogeneous.lhy_reference(st),
                   "upper": homogeneous.upper_bound_3d(st),
                   "dyson_classic": homogeneous.dyson_classic_lower_bound(st)}
    else:
        st2 = homogeneous.GasState2D(args.rho, args.a, args.mu)
        b2 = homogeneous.bounds_2d(st2)
        outputs = {"rho_a2": args.rho * args.a**2, "upper": b2.upper,
                   "lower": b2.lower, "b": b2.b,
                   "upper_error_scale": b2.upper_error_scale,
                   "lower_error_scale": b2.lower_error_scale}
    rec = ResultRecord("bounds", _args_echo(args), outputs, _provenance())
    _emit_record(args, rec)
    return EXIT_OK


def _trap_from_args(args) -> meanfield.TrapPotential:
    if args.trap == "harmonic":
        return meanfield.TrapPotential("harmonic")
    if args.trap == "box":
        return meanfield.TrapPotential("box", side=args.side)
    return meanfield.TrapPotential("homogeneous_power", exponent=args.s)


def cmd_gp(args) -> int:
    trap = _trap_from_args(args)
    prob = meanfield.GPProblem(args.dim, args.N, args.coupling, args.mu, trap,
                               args.n_grid)
    prof, rep = meanfield.gp_minimize(prob)
    if args.profile_out:
        prof.export_csv(args.profile_out)
    rec = ResultRecord("gp", _args_echo(args), rep.as_dict(),
                       _provenance(n_grid=args.n_grid))
    _emit_record(args, rec)
    return EXIT_OK


def cmd_tf(args) -> int:
    trap = _trap_from_args(args)
    prof, rep, mu_tf = meanfield.tf_solve(args.dim, args.N, args.coupling,
                                          trap, args.mu)
    if args.profile_out:
        prof.export_csv(args.profile_out)
    outputs = rep.as_dict()
    outputs["mu_TF"] = mu_tf
    rec = ResultRecord("tf", _args_echo(args), outputs, _provenance())
    _emit_record(args, rec)
    return EXIT_OK


def cmd_ll(args) -> int:
    curve = onedim.default_curve()
    if args.emit_curve:
        curve.export_csv(args.emit_curve)
        return EXIT_OK
    if args.t is None:
        raise ConfigError("ll needs --t or --emit-curve")
    rec = ResultRecord("ll", _args_echo(args),
                       {"t": args.t, "e": curve.e(args.t)}, _provenance())
    _emit_record(args, rec)
    return EXIT_OK


def cmd_regimes(args) -> int:
    trap = onedim.ElongatedTrap(args.N, args.L, args.r, args.a, args.s,
                                args.transverse)
    report = onedim.regime_classify(trap)
    rec = ResultRecord("regimes", _args_echo(args), report.as_dict(),
                       _provenance())
    _emit_record(args, rec)
    return EXIT_OK


def cmd_charged(args) -> int:
    if args.mode == "foldy":
        law = charged.foldy_law(args.rho, args.mu)
        fc = charged.foldy_constant(args.mu)
        outputs = {"energy_per_particle": law.energy_per_particle,
                   "I0": law.i0, "x_integral": fc.x_integral,
                   "x_integral_quadrature": fc.x_integral_quadrature,
                   "note": law.infinite_mass_note}
    elif args.mode == "dyson":
        tc = charged.two_component_energy(args.N, args.mu)
        dm = charged.dyson_functional_minimize(args.mu)
        outputs = {"energy": tc.energy, "E_star": tc.e_star,
                   "virial_residual": dm.virial_residual,
                   "length_scale": tc.length_scale,
                   "correlation_length": tc.correlation_length}
    elif args.mode == "local":
        le = charged.local_energy_integral(args.nu, args.ell, args.mu)
        outputs = {"value": le.value, "closed_form": le.closed_form,
                   "rel_deviation": le.rel_deviation}
    else:
        p = charged.BogolubovParams(args.A, args.B_plus, args.B_minus)
        outputs = {"bound": charged.bogolubov_bound(p)}
    rec = ResultRecord("charged", _args_echo(args), outputs, _provenance())
    _emit_record(args, rec)
    return EXIT_OK


def cmd_verify(args) -> int:
    card = verify.run_all(args.seed)
    text = json.dumps(card, sort_keys=True, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if card["all_passed"] else EXIT_NUMERIC


def cmd_validate(args) -> int:
    sections = parse_config_file(args.config)
    problems = []
    for section, params in sections.items():
        problems += validate_params(section, params)
    if not sections:
        print("empty config; defaults apply")
    for p in problems:
        print(p)
    return EXIT_OK if not problems else EXIT_CONFIG


def _args_echo(args) -> dict:
    skip = {"func", "config", "out", "profile_out", "emit_curve"}
    return {k: v for k, v in vars(args).items()
            if k not in skip and v is not None and not callable(v)}


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bosegas",
                                description="dilute/charged Bose gas numerics")
    p.add_argument("--config", help="sectioned key=value config file")
    sub = p.add_subparsers(dest="subcommand", required=True)

    sc = sub.add_parser("scatter", help="zero-energy scattering solve")
    sc.add_argument("--kind", default="soft_sphere",
                    choices=["hard_core", "soft_sphere", "tabulated"])
    sc.add_argument("--R0", type=float, default=1.0)
    sc.add_argument("--v0", type=float)
    sc.add_argument("--dim", type=int, default=3, choices=[2, 3])
    sc.add_argument("--mu", type=float, default=1.0)
    sc.add_argument("--n-grid", type=int, default=4096)
    sc.add_argument("--potential-file")
    sc.add_argument("--profile-out")
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scatter)

    b = sub.add_parser("bounds", help="homogeneous-gas energy bounds")
    b.add_argument("--dim", type=int, default=3, choices=[2, 3])
    b.add_argument("--rho", type=float, default=1e-4)
    b.add_argument("--a", type=float, default=1.0)
    b.add_argument("--mu", type=float, default=1.0)
    b.add_argument("--sweep", help="Y=lo:hi:n (3D sweep at a=1)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    for name, fn in (("gp", cmd_gp), ("tf", cmd_tf)):
        g = sub.add_parser(name, help=f"{name.upper()} minimization")
        g.add_argument("--dim", type=int, default=3, choices=[2, 3])
        g.add_argument("--N", type=float, default=1.0)
        g.add_argument("--coupling", type=float, required=True,
                       help="a in 3D, alpha in 2D")
        g.add_argument("--mu", type=float, default=1.0)
        g.add_argument("--trap", default="harmonic",
                       choices=["harmonic", "homogeneous_power", "box"])
        g.add_argument("--s", type=float, default=2.0)
        g.add_argument("--side", type=float, default=1.0)
        g.add_argument("--n-grid", type=int, default=4096)
        g.add_argument("--profile-out")
        g.add_argument("--out")
        g.set_defaults(func=fn)

    ll = sub.add_parser("ll", help="Lieb-Liniger energy density")
    ll.add_argument("--t", type=float)
    ll.add_argument("--emit-curve", help="write the 200-node curve CSV here")
    ll.add_argument("--out")
    ll.set_defaults(func=cmd_ll)

    rg = sub.add_parser("regimes", help="classify an elongated trap")
    rg.add_argument("--N", type=float, required=True)
    rg.add_argument("--L", type=float, required=True)
    rg.add_argument("--r", type=float, required=True)
    rg.add_argument("--a", type=float, required=True)
    rg.add_argument("--s", type=float, default=2.0)
    rg.add_argument("--transverse", default="harmonic",
                    choices=["harmonic", "hard_wall"])
    rg.add_argument("--out")
    rg.set_defaults(func=cmd_regimes)

    cg = sub.add_parser("charged", help="charged-gas formulas")
    cg.add_argument("mode", choices=["foldy", "dyson", "local", "bogolubov"])
    cg.add_argument("--rho", type=float, default=1.0)
    cg.add_argument("--mu", type=float, default=1.0)
    cg.add_argument("--N", type=float, default=100.0)
    cg.add_argument("--nu", type=float, default=100.0)
    cg.add_argument("--ell", type=float, default=1.0)
    cg.add_argument("--A", type=float, default=1.0)
    cg.add_argument("--B-plus", type=float, default=0.5)
    cg.add_argument("--B-minus", type=float, default=0.0)
    cg.add_argument("--out")
    cg.set_defaults(func=cmd_charged)

    vf = sub.add_parser("verify", help="run the invariant suite")
    vf.add_argument("--seed", type=int, default=20240)
    vf.add_argument("--out")
    vf.set_defaults(func=cmd_verify)

    vl = sub.add_parser("validate", help="check a config file without running")
    vl.add_argument("config")
    vl.set_defaults(func=cmd_validate)
    return p


def _explicit_keys(argv) -> set:
    """Which options the user actually typed (vs parser defaults)."""
    probe = build_parser()
    for action in probe._actions:
        action.default = argparse.SUPPRESS
    for sub in probe._subparsers._group_actions[0].choices.values():
        for action in sub._actions:
            action.default = argparse.SUPPRESS
    try:
        ns, _ = probe.parse_known_args(argv)
        return set(vars(ns))
    except SystemExit:
        return set()


def _apply_config_defaults(args, argv) -> None:
    if not getattr(args, "config", None) or args.subcommand == "validate":
        return
    explicit = _explicit_keys(argv)
    sections = parse_config_file(args.config)
    section = sections.get(args.subcommand, {})
    for key, raw in section.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"{args.subcommand}.{key}: unknown option")
        if attr in explicit:
            continue  # explicit CLI flags beat config values
        current = getattr(args, attr)
        if isinstance(current, bool):
            setattr(args, attr, raw.lower() in ("1", "true", "yes"))
        elif current is not None:
            setattr(args, attr, type(current)(raw))
        else:
            setattr(args, attr, raw)


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_defaults(args, argv)
        problems = validate_params(args.subcommand, _args_echo(args))
        if problems:
            raise ConfigError("; ".join(problems))
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericError, RuntimeError, ValueError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
