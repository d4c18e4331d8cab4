"""Command-line front end: compute bounds, sweep gamma grids, run the
verification suites, reproduce the comparison figure, evaluate gauges.

All numeric CSV fields are written with 17 significant digits so 64-bit
floats round-trip exactly, and output is byte-identical for a fixed seed
and configuration."""

import argparse
import os
import sys

import numpy as np

from . import bounds, functions, verification
from .core import DomainError, DualPair
from .gauges import kt_gauge_bound, linear_quadratic_kt_instance
from .operators import AffineOp, GradientOp, Joca16Op, SkewPDOp, SubdifferentialOp
from .oracle import DEFAULT_SEED
from .solvers import ConvergenceError, NoSolutionError, UnsupportedOperatorError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

BOUND_HEADER = ["x", "u_star", "gamma", "method", "bound", "exact", "z", "residual"]
FIGURE_HEADER = ["x", "u_star", "new_bound", "carlier_bound", "exact_L"]
GAUGE_HEADER = ["x", "y_star", "gauge_value", "component_primal", "component_dual"]


class ConfigError(ValueError):
    pass


def _fmt(v):
    if v is None:
        return ""
    return f"{float(v):.17g}"


def _fmt_vec(v):
    return ";".join(_fmt(t) for t in np.atleast_1d(v))


def _parse_vec(text):
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise ConfigError(f"cannot parse vector {text!r}") from None


def _parse_point(text):
    """A point "x;u" with ';' between the two vectors and ',' between
    coordinates, e.g. "1;-2" or "1,2;-1,-2"."""
    halves = text.split(";")
    if len(halves) != 2:
        raise ConfigError(f"point {text!r} must have the form 'x;u_star'")
    return _parse_vec(halves[0]), _parse_vec(halves[1])


def _parse_gammas(text):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse gamma list {text!r}") from None
    if any(g <= 0 for g in vals):
        raise ConfigError("gamma values must be positive")
    return vals


def _load_matrix(path):
    try:
        return np.loadtxt(path, ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from None


def _parse_operator(spec, dim):
    kind, _, rest = spec.partition(":")
    if kind in ("grad", "subdiff"):
        f = functions.from_name(rest, dim)
        cls = GradientOp if kind == "grad" else SubdifferentialOp
        return cls(f)
    if kind == "affine":
        return AffineOp(_load_matrix(rest))
    if kind == "skew":
        return SkewPDOp(_load_matrix(rest))
    if kind == "joca16":
        beta_s, _, psi_name = rest.partition(",")
        psi = functions.from_name(psi_name, 1).parts[0]
        return Joca16Op(float(beta_s), psi)
    raise ConfigError(f"unknown operator spec {spec!r}")


def _write_rows(out, header, rows):
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _points_from_args(args):
    pts = []
    for text in args.point or []:
        x, u = _parse_point(text)
        pts.append(DualPair(x, u))
    if not pts:
        raise ConfigError("at least one --point is required")
    return pts


def _bound_row(phi, f, p, gamma, method, op_a=None, op_w=None):
    exact = None
    if phi is not None:
        b = bounds.fy_bound_dispatch(phi, f, p, gamma, method)
        exact = bounds.exact_fenchel_young(phi, p)
        if not np.isfinite(exact):
            exact = None
    elif op_a is not None:
        from .operators import identity as _identity

        W = op_w if op_w is not None else _identity(p.dim)
        if method == "carlier_haraux":
            b = bounds.bound_carlier_haraux(op_a, p, gamma)
        elif method == "strong":
            b = bounds.bound_modulus(W, op_a, p, gamma)
        elif method == "bregman":
            if f is None:
                raise ConfigError("--f is required for the bregman method")
            b = bounds.bound_bregman(f, op_a, p, gamma)
        else:
            b = bounds.bound_pairing(W, op_a, p, gamma)
    else:
        raise ConfigError("either --phi or --op-a is required")
    return [
        _fmt_vec(p.x),
        _fmt_vec(p.u_star),
        _fmt(gamma),
        b.method,
        _fmt(b.value),
        _fmt(exact),
        _fmt_vec(b.z),
        _fmt(b.diagnostics.get("residual", 0.0)),
    ]


def cmd_bound(args):
    pts = _points_from_args(args)
    gammas = _parse_gammas(args.gamma)
    phi = functions.from_name(args.phi, pts[0].dim) if args.phi else None
    f = functions.from_name(args.f, pts[0].dim) if args.f else None
    op_a = _parse_operator(args.op_a, pts[0].dim) if args.op_a else None
    op_w = _parse_operator(args.op_w, pts[0].dim) if args.op_w else None
    rows = [
        _bound_row(phi, f, p, g, args.method, op_a, op_w)
        for p in pts
        for g in gammas
    ]
    _write_rows(args.out, BOUND_HEADER, rows)
    return EXIT_OK


def cmd_sweep(args):
    # Same machinery as bound, but gamma is expected to be a grid.
    return cmd_bound(args)


def cmd_verify(args):
    rows = verification.run_checks(seed=args.seed, corrupt=args.self_test_corrupt)
    out_rows = [
        [
            r["module"],
            r["check"],
            "pass" if r["passed"] else "fail",
            _fmt(r["measured"]),
            _fmt(r["threshold"]),
        ]
        for r in rows
    ]
    _write_rows(args.out, ["module", "check", "status", "measured", "threshold"], out_rows)
    failed = [r for r in rows if not r["passed"]]
    for r in failed:
        print(f"FAILED: {r['module']}.{r['check']} "
              f"measured={r['measured']:.3e} threshold={r['threshold']:.3e}",
              file=sys.stderr)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# --------------------------------------------------------------------------
# Figure reproduction
# --------------------------------------------------------------------------

_GRID_N = 201


def _burg_panel(gamma):
    burg = functions.burg()
    rows = []
    xs = np.linspace(0.05, 5.0, _GRID_N)
    for x in xs:
        rows.append(_figure_point(burg, [x], [-1.0], gamma))
    us = np.linspace(-5.0, -0.05, _GRID_N)
    for u in us:
        rows.append(_figure_point(burg, [1.0], [u], gamma))
    return rows


def _bs_panel(gamma):
    bs = functions.boltzmann_shannon()
    fd = functions.fermi_dirac()
    rows = []
    xs = np.linspace(0.01, 0.99, _GRID_N)
    for u in (1.0, -1.0):
        for x in xs:
            p = DualPair([x], [u])
            new = bounds.bound_bregman(fd, SubdifferentialOp(bs), p, gamma)
            carlier = bounds.bound_carlier_fy(bs, p, gamma)
            exact = bounds.exact_fenchel_young(bs, p)
            rows.append([_fmt(x), _fmt(u), _fmt(new.value), _fmt(carlier.value),
                         _fmt(exact)])
    return rows


def _figure_point(phi, x, u, gamma):
    p = DualPair(x, u)
    new = bounds.bound_legendre_self(phi, p, gamma)
    carlier = bounds.bound_carlier_fy(phi, p, gamma)
    exact = bounds.exact_fenchel_young(phi, p)
    return [_fmt(x[0]), _fmt(u[0]), _fmt(new.value), _fmt(carlier.value),
            _fmt(exact)]


def _write_svg(path, title, rows):
    """Minimal self-contained line chart: new bound, baseline, exact."""
    width, height, margin = 640, 480, 50
    series = [
        ("new bound", "#1f77b4", [float(r[2]) for r in rows]),
        ("baseline bound", "#ff7f0e", [float(r[3]) for r in rows]),
        ("exact", "#2ca02c", [float(r[4]) for r in rows]),
    ]
    all_vals = [v for _, _, ys in series for v in ys if np.isfinite(v)]
    lo, hi = min(all_vals), max(all_vals)
    if hi <= lo:
        hi = lo + 1.0
    n = len(rows)

    def sx(i):
        return margin + (width - 2 * margin) * i / max(n - 1, 1)

    def sy(v):
        return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width // 2}" y="20" text-anchor="middle">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{margin}" y="{height - margin + 20}">grid index 0</text>',
        f'<text x="{width - margin}" y="{height - margin + 20}" '
        f'text-anchor="end">{n - 1}</text>',
        f'<text x="{margin - 5}" y="{height - margin}" text-anchor="end">{lo:.3g}</text>',
        f'<text x="{margin - 5}" y="{margin}" text-anchor="end">{hi:.3g}</text>',
    ]
    for k, (label, color, ys) in enumerate(series):
        pts = " ".join(
            f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(ys) if np.isfinite(v)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" points="{pts}"/>'
        )
        y_leg = margin + 18 * k
        parts.append(
            f'<line x1="{width - margin - 140}" y1="{y_leg}" '
            f'x2="{width - margin - 110}" y2="{y_leg}" stroke="{color}"/>'
        )
        parts.append(
            f'<text x="{width - margin - 104}" y="{y_leg + 4}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_figure1(args):
    out_dir = args.out or "figure1"
    os.makedirs(out_dir, exist_ok=True)
    panels = [
        ("burg_gamma0.1", "Burg entropy, gamma=0.1", _burg_panel(0.1)),
        ("burg_gamma1", "Burg entropy, gamma=1", _burg_panel(1.0)),
        ("burg_gamma10", "Burg entropy, gamma=10", _burg_panel(10.0)),
        ("boltzmann_shannon_gamma1",
         "Boltzmann-Shannon entropy, gamma=1", _bs_panel(1.0)),
    ]
    for name, title, rows in panels:
        _write_rows(os.path.join(out_dir, name + ".csv"), FIGURE_HEADER, rows)
        if args.format != "csv":
            _write_svg(os.path.join(out_dir, name + ".svg"), title, rows)
    return EXIT_OK


def _load_gauge_instance(path):
    cfg = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                cfg[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read instance file {path}: {exc}") from None
    kind = cfg.get("type", "kt_linear_quadratic")
    if kind != "kt_linear_quadratic":
        raise ConfigError(f"unknown gauge instance type {kind!r}")
    try:
        if "L" in cfg and os.path.exists(cfg["L"]):
            L = _load_matrix(cfg["L"])
        else:
            L = np.array(
                [[float(t) for t in row.split()] for row in cfg["L"].split(";")]
            )
        x_bar = _parse_vec(cfg["x_bar"])
        y_bar = _parse_vec(cfg["y_bar"])
        gamma = float(cfg.get("gamma", "1"))
    except KeyError as exc:
        raise ConfigError(f"instance file is missing key {exc}") from None
    return linear_quadratic_kt_instance(x_bar, y_bar, L, gamma)


def cmd_gauge(args):
    inst = _load_gauge_instance(args.instance)
    n = inst.L.shape[1]
    rows = []
    for text in args.point or []:
        x, y_star = _parse_point(text)
        if x.shape[0] != n:
            raise ConfigError("point dimension does not match the instance")
        b = kt_gauge_bound(inst, x, y_star)
        rows.append([
            _fmt_vec(x),
            _fmt_vec(y_star),
            _fmt(b.value),
            _fmt(b.diagnostics["component_primal"]),
            _fmt(b.diagnostics["component_dual"]),
        ])
    if not rows:
        raise ConfigError("at least one --point is required")
    _write_rows(args.out, GAUGE_HEADER, rows)
    return EXIT_OK


# --------------------------------------------------------------------------
# Argument plumbing
# --------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--phi", help="catalog function name for L_phi bounds")
    sub.add_argument("--f", help="kernel function for bregman/pairing methods")
    sub.add_argument("--op-a", dest="op_a", help="operator spec for H_A bounds")
    sub.add_argument("--op-w", dest="op_w", help="kernel operator spec")
    sub.add_argument("--method", default="legendre_self",
                     choices=sorted(bounds.FY_METHODS + ("carlier_haraux",)))
    sub.add_argument("--gamma", default="1")
    sub.add_argument("--point", action="append",
                     help="evaluation point 'x;u_star', ',' between coordinates")
    sub.add_argument("--grid", help="reserved for grid sweeps (lo:hi:n)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="haraux",
        description="Lower bounds on Haraux and Fenchel-Young functions",
    )
    parser.add_argument("--config", help="key=value file mirroring the flags")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("bound", "sweep"):
        sub = subs.add_parser(name)
        _add_common(sub)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--out")
        sub.add_argument("--format", default="csv", choices=["csv", "svg"])

    sub = subs.add_parser("verify")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out")
    sub.add_argument("--self-test-corrupt", action="store_true",
                     help="deliberately break a tolerance (harness self-test)")

    sub = subs.add_parser("figure1")
    sub.add_argument("--out")
    sub.add_argument("--format", default="svg", choices=["csv", "svg"])
    sub.add_argument("--seed", type=int, default=None)

    sub = subs.add_parser("gauge")
    sub.add_argument("--instance", required=True)
    sub.add_argument("--point", action="append")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out")
    return parser


def _apply_config(args, path):
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                value = value.strip()
                if not hasattr(args, key):
                    raise ConfigError(f"unknown config key {key!r}")
                current = getattr(args, key)
                if current is None:
                    if key == "seed":
                        value = int(value)
                    elif key == "point":
                        value = [value]
                    setattr(args, key, value)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return
    env = os.environ.get("HARAUX_SEED")
    args.seed = int(env) if env is not None else DEFAULT_SEED


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, args.config)
        _resolve_seed(args)
        handler = {
            "bound": cmd_bound,
            "sweep": cmd_sweep,
            "verify": cmd_verify,
            "figure1": cmd_figure1,
            "gauge": cmd_gauge,
        }[args.command]
        return handler(args)
    except (ConfigError, ValueError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoSolutionError, ConvergenceError, UnsupportedOperatorError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
