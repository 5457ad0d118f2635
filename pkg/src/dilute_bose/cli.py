"""Command-line front end.

Exit status: 0 success, 1 invalid input or unwritable output, 2 numerical failure.
Units throughout: hbar = 2m = 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bound, ideal_gas
from .errors import DomainError, NumericalError
from .potentials import RadialPotential, truncate
from .scattering import scattering_length_ode, scattering_length_variational

UNITS_LINE = "# units: hbar = 2m = 1"

IDEAL_COLUMNS = ["T", "rho", "mu0", "f0", "cV", "condensate"]
BOUND_SWEEP_COLUMNS = ["x", "a", "beta", "rho", "branch", "error_factor", "lower_bound"]


# ---------------------------------------------------------------------------- output

def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def render_csv(columns, rows, comments=()) -> str:
    buf = io.StringIO()
    buf.write(UNITS_LINE + "\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_artifact(text: str, out: str | None) -> None:
    """Atomic write (temp file in the target directory, then rename); stdout when out is None."""
    if out is None:
        sys.stdout.write(text)
        return
    target = os.path.abspath(out)
    try:
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-")
    except OSError as exc:
        raise DomainError(f"{out}: cannot write ({exc.strerror})") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise DomainError(f"{out}: cannot write ({exc.strerror})") from exc


def _summary(args, line: str) -> None:
    print(line, file=sys.stderr if args.out is None else sys.stdout)


# ---------------------------------------------------------------------------- inputs

def load_potential(path: str) -> RadialPotential:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON ({exc.msg})") from exc
    try:
        return RadialPotential.from_dict(data)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def parse_grid(text: str) -> np.ndarray:
    """'start:stop:count' (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(a), float(b), n)
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise DomainError(f"bad grid '{text}': use start:stop:count or v1,v2,...") from exc


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        env = os.environ.get("BOSE_THERMO_JOBS")
        if env is None:
            return 1
        try:
            jobs = int(env)
        except ValueError as exc:
            raise DomainError("BOSE_THERMO_JOBS: must be an integer") from exc
    if jobs < 1:
        raise DomainError("--jobs: must be at least 1")
    return jobs


def _map(fn, items, jobs):
    if jobs == 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------- commands

def cmd_scattering(args) -> None:
    p = load_potential(args.potential)
    out = {"potential": p.to_dict()}
    if args.method in ("ode", "both"):
        sol = scattering_length_ode(p, r_max=args.r_max, steps=args.steps)
        out["ode"] = {"a": sol.a, "tail_fit_residual": sol.tail_fit_residual, "slope": sol.slope}
    if args.method in ("variational", "both"):
        R = args.R if args.R is not None else max(4.0 * p.R0, p.R0 + 1.0)
        sol = scattering_length_variational(p, R, args.mesh)
        out["variational"] = {"a": sol.a, "R": R, "mesh": args.mesh}
    write_artifact(render_json(out), args.out)
    parts = [f"{m}: a={out[m]['a']:.12g}" for m in ("ode", "variational") if m in out]
    if "ode" in out:
        parts.append(f"residual={out['ode']['tail_fit_residual']:.3g}")
    _summary(args, "scattering " + " ".join(parts))


def cmd_truncate(args) -> None:
    p = load_potential(args.potential)
    t = truncate(p, args.phi, construction=args.construction, epsilon=args.epsilon,
                 a_est=args.a_est)
    a_t = scattering_length_ode(t.potential).a
    out = {"base": p.to_dict(), "truncated": t.potential.to_dict(), "phi": t.phi,
           "cut_radius_s": t.cut_radius_s, "epsilon": t.epsilon, "tau": t.tau,
           "construction": t.construction, "budget": t.budget, "a_tilde": a_t}
    write_artifact(render_json(out), args.out)
    _summary(args, f"truncate construction={t.construction} budget={t.budget:.10g} a_tilde={a_t:.10g}")


def _ideal_row(bt):
    beta, rho = bt
    pt = ideal_gas.ideal_gas_point(beta, rho)
    return {"T": 1.0 / beta, "rho": rho, "mu0": pt.mu0, "f0": pt.f0, "cV": pt.specific_heat,
            "condensate": pt.condensate}


def cmd_ideal(args) -> None:
    if args.beta is None and args.T_grid is None:
        raise DomainError("give --beta or --T-grid")
    betas = [args.beta] if args.T_grid is None else [1.0 / t for t in parse_grid(args.T_grid)]
    rhos = [args.rho] if args.rho_grid is None else list(parse_grid(args.rho_grid))
    if any(r is None for r in rhos):
        raise DomainError("give --rho or --rho-grid")
    items = [(float(b), float(r)) for b in betas for r in rhos]
    rows = _map(_ideal_row, items, resolve_jobs(args.jobs))
    if args.format == "json":
        text = render_json({"columns": IDEAL_COLUMNS, "rows": rows})
    else:
        text = render_csv(IDEAL_COLUMNS, rows,
                          ["T temperature, rho density, mu0 chemical potential, f0 free energy "
                           "density, cV specific heat per volume, condensate [rho-rho_c]_+"])
    write_artifact(text, args.out)
    _summary(args, f"ideal rows={len(rows)}")


def _a_tilde_from(args):
    if args.potential is None:
        return None, None
    p = load_potential(args.potential)
    if args.phi is None:
        return scattering_length_ode(p).a, p.R0
    t = truncate(p, args.phi)
    return scattering_length_ode(t.potential).a, p.R0


def cmd_bound(args) -> None:
    a_t, R0 = _a_tilde_from(args)
    rep = bound.lower_bound(args.a, args.beta, args.rho, args.delta, args.A, args.B, a_t, R0)
    write_artifact(render_json(rep.to_dict()), args.out)
    _summary(args, f"bound branch={rep.branch} lower_bound={rep.lower_bound:.12g} "
                   f"error_factor={rep.error_factor:.6g}")


def _bound_row(item):
    x, beta, rho, delta, A, B = item
    a = x / (rho**2 * beta**2.5)
    rep = bound.lower_bound(a, beta, rho, delta, A, B)
    return {"x": x, "a": a, "beta": beta, "rho": rho, "branch": rep.branch,
            "error_factor": rep.error_factor, "lower_bound": rep.lower_bound}


def cmd_sweep(args) -> None:
    jobs = resolve_jobs(args.jobs)
    if args.what == "bound":
        xs = parse_grid(args.x_grid) if args.x_grid else 10.0 ** -np.arange(2, 10)
        items = [(float(x), args.beta, args.rho, args.delta, args.A, args.B) for x in xs]
        rows = _map(_bound_row, items, jobs)
        cols = BOUND_SWEEP_COLUMNS
        comments = [f"a = x / (rho^2 beta^(5/2)) at beta={args.beta!r}, rho={args.rho!r}, "
                    f"delta={args.delta!r}; unit constants, illustrative"]
    else:
        if args.potential is None:
            raise DomainError("sweep phi needs --potential")
        p = load_potential(args.potential)
        phis = parse_grid(args.phi_grid or "2,5,10,100")
        rows = []
        for phi in phis:
            t = truncate(p, float(phi))
            rows.append({"phi": float(phi), "construction": t.construction,
                         "a_tilde": scattering_length_ode(t.potential).a, "budget": t.budget})
        cols = ["phi", "construction", "a_tilde", "budget"]
        comments = []
    text = render_json({"columns": cols, "rows": rows}) if args.format == "json" \
        else render_csv(cols, rows, comments)
    write_artifact(text, args.out)
    _summary(args, f"sweep {args.what} rows={len(rows)}")


def cmd_kernels_verify(args) -> None:
    from . import kernels as K

    check = args.check
    if check == "hole":
        lams = parse_grid(args.lambdas) if args.lambdas else np.array([0, 1, 2, 3]) * math.pi / 8
        ratios = parse_grid(args.ratios) if args.ratios else np.array([0.01, 0.05, 0.09])
        floor = abs(K.verify_hole_lemma(0.05 * args.R, args.R, 0.0, args.mesh).eigenvalue)
        tol = 4.0 * max(floor, np.finfo(float).eps)
        cases = []
        for lam in lams:
            for q in ratios:
                r = K.verify_hole_lemma(float(q) * args.R, args.R, float(lam), args.mesh)
                cases.append({"lambda": float(lam), "R0_over_R": float(q),
                              "eigenvalue": r.eigenvalue, "rhs_constant": r.rhs_constant})
        worst = min(c["eigenvalue"] for c in cases)
        out = {"inequality": "hole", "eigenvalue": worst, "tol_disc": tol, "holds": worst >= -tol,
               "config": {"R": args.R, "mesh": args.mesh}, "cases": cases}
    elif check == "dyson":
        from .potentials import RadialPotential as RP
        pot = load_potential(args.potential) if args.potential else RP.hard_core(args.R0)
        if pot.kind == "hard_core":
            pot = truncate(pot, args.phi).potential
        scat = K.random_scatterers(args.scatterers, args.box or 32.0, args.R / 5, seed=args.seed) \
            if args.scatterers else ()
        cfg = K.DysonCheckConfig(scat, R=args.R, epsilon=args.epsilon)
        grids = tuple(int(g) for g in parse_grid(args.grids))
        box = args.box or 32.0
        v = K.certify_dyson(cfg, pot, K.CutoffProfile(args.s or args.R), box, grids,
                            seed=args.seed)
        out = v.to_dict()
        out["config"] = {**cfg.to_dict(), "box_L": box, "grids": list(grids),
                         "s": args.s or args.R, "seed": args.seed, "potential": pot.to_dict()}
    elif check == "decay":
        o = K.PolynomialBump(args.K)
        s_dec, box = args.s or 8.0, args.box or 128.0
        reps = [K.decay_bound_check(o, s_dec, box, args.grid, n, args.constant).to_dict()
                for n in (0, 1, 2)]
        out = {"inequality": "decay", "holds": all(r["holds"] for r in reps), "cases": reps,
               "eigenvalue": None, "tol_disc": 0.0,
               "config": {"s": s_dec, "box_L": box, "grid_n": args.grid, "K": args.K,
                          "constant": args.constant}}
    else:  # hat
        g, g2, g3 = K.gaussian_profile()
        bd = K.ball_decomposition_m(g, g2, g3)
        probes = [0.1, 0.5, 1.0, 2.0, 4.0]
        err = max(abs(bd.reconstruct(t) - g(t)) for t in probes)
        geo = max(abs(K.hat_j_geometric(t) - K.hat_j(t)) for t in (0.0, 0.3, 0.9))
        out = {"inequality": "hat", "hat_moment": K.hat_moment(), "geometric_max_diff": geo,
               "gaussian_reconstruction_max_err": err, "holds": err <= 1e-6 and geo <= 1e-8,
               "eigenvalue": None, "tol_disc": 0.0, "config": {"probes": probes}}
    write_artifact(render_json(out), args.out)
    _summary(args, f"kernels-verify {check} holds={out['holds']}")


# ---------------------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors: exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dilute-bose", description=__doc__,
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt="json"):
        p.add_argument("--out", help="output path (atomic write); stdout if omitted")
        p.add_argument("--format", choices=["csv", "json"], default=fmt)
        p.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker processes (default: $BOSE_THERMO_JOBS or 1)")

    p = sub.add_parser("scattering", help="scattering length of a potential")
    p.add_argument("--potential", required=True, help="JSON potential file")
    p.add_argument("--method", choices=["ode", "variational", "both"], default="ode")
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--steps", type=int, default=2001)
    p.add_argument("--R", type=float, default=None, help="ball radius for the variational method")
    p.add_argument("--mesh", type=int, default=4096)
    common(p)
    p.set_defaults(func=cmd_scattering)

    p = sub.add_parser("truncate", help="cap int r^2 v at 2 phi")
    p.add_argument("--potential", required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--construction", choices=["auto", "step", "shell"], default="auto")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--a-est", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("ideal", help="ideal Bose gas table",
                       description="CSV columns: T, rho, mu0, f0, cV, condensate (hbar = 2m = 1).")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--T-grid", default=None, help="start:stop:count or list")
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--rho-grid", default=None, help="start:stop:count or list")
    common(p, fmt="csv")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("bound", help="free-energy lower bound report")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--delta", type=float, default=bound.DEFAULT_DELTA)
    p.add_argument("--A", type=float, default=bound.DEFAULT_A)
    p.add_argument("--B", type=float, default=bound.DEFAULT_B)
    p.add_argument("--potential", default=None, help="use its truncated scattering length")
    p.add_argument("--phi", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("kernels-verify", help="lattice checks of the kernel inequalities")
    p.add_argument("check", choices=["dyson", "hole", "decay", "hat"])
    p.add_argument("--potential", default=None)
    p.add_argument("--R0", type=float, default=4.0)
    p.add_argument("--phi", type=float, default=40.0)
    p.add_argument("--R", type=float, default=8.0)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--box", type=float, default=None,
                   help="box side (default 32 for dyson, 128 for decay)")
    p.add_argument("--grids", default="16,24,32")
    p.add_argument("--scatterers", type=int, default=1)
    p.add_argument("--mesh", type=int, default=1024)
    p.add_argument("--lambdas", default=None)
    p.add_argument("--ratios", default=None)
    p.add_argument("--grid", type=int, default=128)
    p.add_argument("--K", type=int, default=8)
    p.add_argument("--constant", choices=["stated", "derived"], default="stated")
    common(p)
    p.set_defaults(func=cmd_kernels_verify)

    p = sub.add_parser("sweep", help="parameter sweeps",
                       description="bound: CSV columns x, a, beta, rho, branch, error_factor, "
                                   "lower_bound.  phi: truncated scattering length against phi.")
    p.add_argument("what", choices=["bound", "phi"])
    p.add_argument("--x-grid", default=None)
    p.add_argument("--beta", type=float, default=10.0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=bound.DEFAULT_DELTA)
    p.add_argument("--A", type=float, default=bound.DEFAULT_A)
    p.add_argument("--B", type=float, default=bound.DEFAULT_B)
    p.add_argument("--potential", default=None)
    p.add_argument("--phi-grid", default=None)
    common(p, fmt="csv")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else 1
    try:
        args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
