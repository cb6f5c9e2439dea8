"""Command-line interface: solving, verification, curve emission, limits.

Output conventions: solution descriptors are key-value text documents
(``key = value``, floats via repr so that re-parsing is bitwise exact);
profile and curve data are comma-separated tables.  All cohomology classes
are reported as coefficients of [. /(2 pi)] in the ([E0], [C]) basis.

Exit codes: 0 ok, 1 usage error, 2 semistable, 3 unstable, 4 residual
failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import coupled, dhym, limits, tke
from .errors import DhymRuledError, NoSolutionError, TkeNotFoundError
from .params import (
    BundleClass,
    StabilityClass,
    canonicalize,
    classify,
    cohomology_classes,
    from_complexified,
    make_surface,
    phase_constant,
    stability_margin,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SEMISTABLE = 2
EXIT_UNSTABLE = 3
EXIT_RESIDUAL = 4

#: Residual acceptance thresholds for the solve/profile verification suite.
THRESHOLDS = {
    "max_dhym_residual": 1e-10,
    "max_im_part": 1e-12,
    "max_scalar_residual": 1e-9,
    "boundary_err_minus": 1e-10,
    "boundary_err_plus": 1e-10,
    "psi_err_minus": 1e-10,
    "psi_err_plus": 1e-10,
    "slope_err_minus": 1e-9,
    "slope_err_plus": 1e-9,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_surface_args(p):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--kprime", type=float, required=True)


def _add_bundle_args(p):
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--complexified", action="store_true")
    p.add_argument("--kpp", type=float)


def _add_common_args(p):
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out", type=str, default=None)


def _resolve_params(args):
    if getattr(args, "complexified", False):
        if args.kpp is None:
            raise DhymRuledError("--complexified requires --kpp")
        return from_complexified(args.k, args.h, args.kprime, args.kpp)
    if args.k1 is None or args.k2 is None:
        raise DhymRuledError("--k1 and --k2 are required (or use --complexified)")
    s = make_surface(args.k, args.h, args.kprime)
    return s, canonicalize(BundleClass(k1=args.k1, k2=args.k2))


def residual_summary(s, b, sol, prof, num: int = 1001) -> dict:
    """Max-abs residuals of both equations plus all boundary errors."""
    interior = np.linspace(sol.t_minus, sol.t_plus, num)[1:-1]
    tgt_minus, tgt_plus = dhym.boundary_targets(s, b)
    im, _ = coupled.phase_and_radius(prof, s, b, sol, interior)
    out = {
        "max_dhym_residual": float(np.max(np.abs(dhym.ode_residual_H(sol, interior)))),
        "max_im_part": float(np.max(np.abs(im))),
        "max_scalar_residual": float(
            np.max(np.abs(coupled.scalar_residual(prof, s, b, interior)))
        ),
        "boundary_err_minus": abs(dhym.eval_H(sol, sol.t_minus) - tgt_minus),
        "boundary_err_plus": abs(dhym.eval_H(sol, sol.t_plus) - tgt_plus),
        "psi_err_minus": abs(coupled.eval_psi(prof, prof.t_minus)),
        "psi_err_plus": abs(coupled.eval_psi(prof, prof.t_plus)),
        "slope_err_plus": abs(
            coupled.eval_psi_deriv(prof, prof.t_plus, 1)
            + 2.0 * prof.beta0 * prof.t_plus
        ),
    }
    if sol.regularity == "smooth":
        out["slope_err_minus"] = abs(
            coupled.eval_psi_deriv(prof, prof.t_minus, 1)
            - 2.0 * prof.beta_inf * prof.t_minus
        )
    return out


def residuals_pass(summary: dict) -> bool:
    return all(summary[k] <= v for k, v in THRESHOLDS.items() if k in summary)


def build_descriptor(s, b, sol, prof, alpha_prime=None) -> dict:
    phase = phase_constant(b, s)
    margin = stability_margin(s, b)
    pos = coupled.positivity_certificate(prof)
    C, Cprime = dhym.integration_constants(s, b)
    d = {
        "k": s.k,
        "h": s.h,
        "kprime": s.kprime,
        "k1": b.k1,
        "k2": b.k2,
        "conjugated": b.conjugated,
        "beta0": prof.beta0,
        "alpha_prime": alpha_prime,
        "x": s.x,
        "s_sigma": s.s_sigma,
        "cos_theta": phase.cos_theta,
        "sin_theta": phase.sin_theta,
        "r_hat": phase.r_hat,
        "s_hat": phase.s_hat,
        "C": C,
        "Cprime": prof.Cprime,
        "alpha": prof.alpha,
        "d0": prof.d0,
        "d1": prof.d1,
        "c2": prof.c2,
        "c3": prof.c3,
        "cR": prof.cR,
        "beta_inf": prof.beta_inf,
        "t_minus": prof.t_minus,
        "t_plus": prof.t_plus,
        "stability_class": classify(margin).value,
        "stability_margin": margin,
        "regularity": sol.regularity,
        "positivity_method": pos.method,
        "positivity_min": pos.min_value,
        "positivity_argmin": pos.argmin,
    }
    d.update(residual_summary(s, b, sol, prof))
    return d


def _r(v) -> str:
    """repr with numpy scalars demoted to builtin floats."""
    if isinstance(v, np.floating):
        v = float(v)
    return repr(v)


def format_descriptor(d: dict) -> str:
    lines = [
        "# coupled-solution descriptor; classes in [./(2 pi)] basis,",
        "# floats serialized via repr (lossless round-trip)",
    ]
    for k, v in d.items():
        lines.append(f"{k} = {_r(v)}")
    return "\n".join(lines) + "\n"


def parse_descriptor(text: str) -> dict:
    """Inverse of format_descriptor (bitwise-exact for floats)."""
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition(" = ")
        if val == "None":
            out[key] = None
        elif val in ("True", "False"):
            out[key] = val == "True"
        elif val.startswith("'"):
            out[key] = val.strip("'")
        else:
            out[key] = float(val) if ("." in val or "e" in val or "inf" in val) else int(val)
    return out


def reverify(d: dict) -> dict:
    """Recompute the residual summary from a parsed descriptor."""
    s = make_surface(int(d["k"]), int(d["h"]), d["kprime"])
    b = BundleClass(k1=d["k1"], k2=d["k2"], conjugated=bool(d["conjugated"]))
    sol = dhym.solve_dhym(s, b)
    prof = coupled.conical_coefficients(s, b, d["beta0"])
    return residual_summary(s, b, sol, prof)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solve_pipeline(args):
    s, b = _resolve_params(args)
    alpha_prime = getattr(args, "alpha_prime", None)
    if alpha_prime is not None:
        sol, prof = limits.scaled_solution(s, b, alpha_prime)
        b = BundleClass(k1=alpha_prime * b.k1, k2=alpha_prime * b.k2,
                        conjugated=b.conjugated)
        return s, b, sol, prof, alpha_prime
    beta0 = getattr(args, "beta0", None) or 1.0
    cls = classify(stability_margin(s, b), args.tol)
    if cls is StabilityClass.SEMISTABLE and not getattr(
        args, "allow_semistable", False
    ):
        print("semistable class: pass --allow-semistable to proceed", file=sys.stderr)
        raise SystemExit(EXIT_SEMISTABLE)
    sol = dhym.solve_dhym(s, b, args.tol)
    prof = coupled.conical_coefficients(s, b, beta0)
    return s, b, sol, prof, None


def cmd_check(args) -> int:
    s, b = _resolve_params(args)
    margin = stability_margin(s, b)
    cls = classify(margin, args.tol)
    phase = phase_constant(b, s)
    om, f = cohomology_classes(s, b)
    print(f"stability_margin = {margin!r}")
    print(f"stability_class = {cls.value}")
    print(f"cos_theta = {phase.cos_theta!r}")
    print(f"sin_theta = {phase.sin_theta!r}")
    print(f"r_hat = {phase.r_hat!r}")
    print(f"s_hat = {phase.s_hat!r}")
    print(f"omega_class = ({om.a!r}, {om.b!r})")
    print(f"F_class = ({f.a!r}, {f.b!r})")
    if cls is StabilityClass.STABLE:
        return EXIT_OK
    return EXIT_SEMISTABLE if cls is StabilityClass.SEMISTABLE else EXIT_UNSTABLE


def cmd_solve(args) -> int:
    s, b, sol, prof, alpha_prime = _solve_pipeline(args)
    d = build_descriptor(s, b, sol, prof, alpha_prime)
    _write(format_descriptor(d), args.out)
    if not residuals_pass(d):
        print("residual suite failed", file=sys.stderr)
        return EXIT_RESIDUAL
    if sol.regularity == "holder12":
        return EXIT_SEMISTABLE
    return EXIT_OK


def cmd_profile(args) -> int:
    s, b, sol, prof, _ = _solve_pipeline(args)
    t = np.linspace(sol.t_minus, sol.t_plus, args.samples)
    rows = ["t,phi,psi,H,im_residual,scalar_residual"]
    for ti in t:
        H = dhym.eval_H(sol, ti)
        psi = coupled.eval_psi(prof, ti)
        phi = psi / (2.0 * ti)
        if sol.regularity == "holder12" and ti == sol.t_minus:
            im_s = scal_s = ""  # derivative-based columns undefined at the
            # square-root endpoint
        else:
            im, _re = coupled.phase_and_radius(prof, s, b, sol, ti)
            scal = coupled.scalar_residual(prof, s, b, ti)
            im_s, scal_s = _r(im), _r(scal)
        rows.append(f"{_r(ti)},{_r(phi)},{_r(psi)},{_r(H)},{im_s},{scal_s}")
    _write("\n".join(rows) + "\n", args.out)
    summary = residual_summary(s, b, sol, prof)
    if not residuals_pass(summary):
        print("residual suite failed", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_SEMISTABLE if sol.regularity == "holder12" else EXIT_OK


def cmd_tke(args) -> int:
    s, b = _resolve_params(args)
    if args.solve_beta:
        beta0 = tke.solve_beta0(s, b)
        print(f"beta0 = {beta0!r}")
        print(f"condition_residual = {tke.condition_residual(s, b, beta0)!r}")
    else:
        beta0 = args.beta0 or 1.0
        a = tke.analyze(s, b, beta0)
        print(f"gamma = {a.gamma!r}")
        print(f"F_value = {a.F_value!r}")
        print(f"H_at_1 = {a.H_at_1!r}")
        print(f"beta_bar = {a.beta_bar!r}")
        print(f"condition_residual = {a.condition_residual!r}")
    return EXIT_OK


def cmd_figure2(args) -> int:
    beta_bar = tke.beta_asymptote(args.k, args.kprime, args.h)
    rows = [f"# beta_bar = {beta_bar!r}", "beta,H"]
    for beta in np.linspace(0.0, 1.0, args.samples):
        beta = float(beta)
        try:
            rows.append(f"{beta!r},{_r(tke.H_beta(args.k, args.kprime, args.h, beta))}")
        except DhymRuledError:
            rows.append(f"{beta!r},")
    _write("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_limits(args) -> int:
    s, b = _resolve_params(args)
    alphas = [float(a) for a in args.alphas.split(",")]
    fam = limits.build_family(s, b, alphas)
    if args.mode == "large":
        rep = limits.large_radius_check(fam)
    else:
        rep = limits.small_radius_check(fam)
    lines = ["alpha_prime,sup_error"]
    for a, e in zip(rep.alphas, rep.sup_errors):
        lines.append(f"{_r(a)},{_r(e)}")
    lines.append(f"# fitted_order = {_r(rep.order)}")
    for k, v in rep.constants.items():
        lines.append(f"# {k} = {_r(v)}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dhym-ruled",
        description=(
            "Explicit coupled constant-phase / scalar-curvature solutions "
            "on ruled surfaces, with verification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="stability and class data")
    _add_surface_args(p)
    _add_bundle_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve and emit a descriptor")
    _add_surface_args(p)
    _add_bundle_args(p)
    _add_common_args(p)
    p.add_argument("--beta0", type=float, default=None)
    p.add_argument("--alpha-prime", dest="alpha_prime", type=float, default=None)
    p.add_argument("--allow-semistable", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("profile", help="emit the sampled profile table")
    _add_surface_args(p)
    _add_bundle_args(p)
    _add_common_args(p)
    p.add_argument("--beta0", type=float, default=None)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--allow-semistable", action="store_true")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("tke", help="twisted Kaehler-Einstein reduction")
    _add_surface_args(p)
    _add_bundle_args(p)
    _add_common_args(p)
    p.add_argument("--beta0", type=float, default=None)
    p.add_argument("--solve-beta", action="store_true")
    p.set_defaults(func=cmd_tke)

    p = sub.add_parser("figure2", help="emit the cone-angle matching curve")
    _add_surface_args(p)
    _add_common_args(p)
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("limits", help="scaled-family convergence study")
    _add_surface_args(p)
    _add_bundle_args(p)
    _add_common_args(p)
    p.add_argument("--mode", choices=("large", "small"), required=True)
    p.add_argument("--alphas", type=str, required=True)
    p.set_defaults(func=cmd_limits)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except TkeNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DhymRuledError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
