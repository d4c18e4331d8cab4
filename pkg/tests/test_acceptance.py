"""End-to-end acceptance gate.

Each test exercises one headline guarantee of the library at its stated
tolerance over a fixed-seed random sample, and prints a single
pass/fail line so the suite output doubles as an acceptance report.
"""

import math

import numpy as np
import pytest

from haraux import bounds, functions, oracle
from haraux.core import DualPair
from haraux.gauges import kt_gauge_bound, linear_quadratic_kt_instance, \
    stacked_inclusion, theta_bound
from haraux.operators import AffineOp, GradientOp, SubdifferentialOp, identity
from haraux.solvers import ResolventProblem, bregman_prox, lambert_w, \
    resolvent_residual, solve_resolvent

SEED = 0x48415241
N_SAMPLES = 1000


def _report(num, name, ok, detail):
    print(f"[acceptance {num}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_1_composite_sharpness_chain():
    """phi = t^2: baseline d^2/9 < self-bound d^2/8 < exact d^2/4."""
    rng = np.random.default_rng(SEED)
    phi = functions.from_name("quad_plus:quadratic")
    worst = 0.0
    ordered = True
    for _ in range(N_SAMPLES):
        x, u = rng.uniform(-5.0, 5.0, size=2)
        p = DualPair([x], [u])
        d2 = (2.0 * x - u) ** 2
        carlier = bounds.bound_carlier_fy(phi, p, 1.0).value
        selfb = bounds.bound_legendre_self(phi, p, 1.0).value
        exact = bounds.exact_fenchel_young(phi, p)
        worst = max(worst, abs(carlier - d2 / 9.0), abs(selfb - d2 / 8.0),
                    abs(exact - d2 / 4.0))
        ordered &= carlier <= selfb + 1e-12 and selfb <= exact + 1e-12
        if d2 > 1e-8:
            ordered &= carlier < selfb < exact
    _report(1, "composite sharpness chain", worst <= 1e-10 and ordered,
            f"worst closed-form gap {worst:.2e} over {N_SAMPLES} points")


def test_2_burg_closed_form():
    """Bregman bound for the Burg self-pair equals its closed form and
    stays below the exact Fenchel-Young value."""
    rng = np.random.default_rng(SEED + 2)
    burg = functions.burg()
    A = SubdifferentialOp(functions.burg())
    worst_eq = 0.0
    worst_dom = -math.inf
    for gamma in (0.1, 1.0, 10.0):
        for _ in range(N_SAMPLES // 3 + 1):
            xi = rng.uniform(1e-3, 5.0)
            mu = rng.uniform(-5.0, -1e-3)
            p = DualPair([xi], [mu])
            b = bounds.bound_bregman(burg, A, p, gamma)
            closed = gamma * (1.0 + xi * mu) ** 2 / (
                (1.0 + gamma) * (1.0 - gamma * xi * mu)
            )
            exact = -1.0 - math.log(-xi * mu) - xi * mu
            worst_eq = max(worst_eq, abs(b.value - closed))
            worst_dom = max(worst_dom, b.value - exact)
    _report(2, "Burg closed form", worst_eq <= 1e-10 and worst_dom <= 1e-9,
            f"worst equality gap {worst_eq:.2e}, "
            f"worst domination slack {worst_dom:.2e}")


def test_3_fermi_dirac_zeta():
    """Closed-form auxiliary point vs the generic root-finder, and
    domination of the resulting bound by the exact value."""
    rng = np.random.default_rng(SEED + 3)
    fd = functions.fermi_dirac()
    bs = functions.boltzmann_shannon()
    worst_z = 0.0
    worst_dom = -math.inf
    for _ in range(N_SAMPLES):
        xi = rng.uniform(0.01, 0.99)
        mu = rng.uniform(-3.0, 3.0)
        gamma = float(rng.choice([0.5, 1.0, 2.0]))
        zeta = bounds.fermi_dirac_zeta([xi], [mu], gamma)[0]
        rhs = fd.gradient([xi]) + gamma * np.array([mu])
        z = bregman_prox(fd, bs, gamma, rhs)[0]
        worst_z = max(worst_z, abs(z - zeta))
        value, _ = bounds.fermi_dirac_bound_closed([xi], [mu], gamma)
        exact = xi * math.log(xi) - xi + math.exp(mu) - xi * mu
        worst_dom = max(worst_dom, value - exact)
    _report(3, "Fermi-Dirac zeta formula",
            worst_z <= 1e-8 and worst_dom <= 1e-9,
            f"worst zeta gap {worst_z:.2e}, worst domination {worst_dom:.2e}")


def test_4_figure_panels(figure1_dir):
    """In every panel the new bound beats the baseline somewhere, and
    neither bound ever exceeds the exact value."""
    names = ["burg_gamma0.1", "burg_gamma1", "burg_gamma10",
             "boltzmann_shannon_gamma1"]
    ok = True
    details = []
    for name in names:
        data = np.genfromtxt(figure1_dir / f"{name}.csv", delimiter=",",
                             names=True)
        new, carlier, exact = (data["new_bound"], data["carlier_bound"],
                               data["exact_L"])
        margin = float(np.max(new - carlier))
        overshoot = float(max(np.max(new - exact), np.max(carlier - exact)))
        ok &= margin >= 1e-6 and overshoot <= 1e-9
        details.append(f"{name}: margin {margin:.2e}, overshoot {overshoot:.2e}")
    _report(4, "figure panels", ok, "; ".join(details))


def test_5_graph_characterization():
    """Bounds vanish exactly on the graph of the subdifferential and the
    pairing bound is strictly positive off it."""
    rng = np.random.default_rng(SEED + 5)
    cases = {
        "quadratic": (-3.0, 3.0),
        "burg": (0.2, 3.0),
        "boltzmann_shannon": (0.2, 3.0),
        "fermi_dirac": (0.1, 0.9),
    }
    worst_on = 0.0
    worst_off = math.inf
    for name, box in cases.items():
        phi = functions.from_name(name)
        for _ in range(50):
            x = np.array([rng.uniform(*box)])
            g = phi.gradient(x)
            on = DualPair(x, g)
            for method in bounds.FY_METHODS:
                worst_on = max(
                    worst_on,
                    bounds.fy_bound_dispatch(phi, None, on, 1.0, method).value,
                )
            delta = rng.uniform(0.1, 1.0) * (-1.0 if name == "burg" else
                                             float(rng.choice([-1.0, 1.0])))
            off = DualPair(x, g + delta)
            worst_off = min(
                worst_off,
                bounds.fy_bound_dispatch(phi, None, off, 1.0, "pairing").value,
            )
    _report(5, "graph characterization",
            worst_on <= 1e-10 and worst_off >= 1e-8,
            f"worst on-graph bound {worst_on:.2e}, "
            f"smallest off-graph bound {worst_off:.2e}")


def test_6_oracle_consistency():
    """Sampled-supremum oracle: refinement-monotone, convergent for the
    identity, and an upper reference for every computed bound."""
    A = GradientOp(functions.quadratic(1))
    p = DualPair([1.0], [0.0])
    mono = True
    s = oracle.sample_graph(A, [(-3.0, 3.0)], 16)
    prev = oracle.haraux_lower_approx(s, p)
    for _ in range(5):
        s = oracle.refine(s)
        cur = oracle.haraux_lower_approx(s, p)
        mono &= cur >= prev
        prev = cur

    dense = oracle.sample_graph(A, [(-10.0, 10.0)], 4096)
    conv_gap = 0.0
    for x, u in [(1.0, 0.0), (4.0, -3.0), (-5.0, 2.0)]:
        approx = oracle.haraux_lower_approx(dense, DualPair([x], [u]))
        conv_gap = max(conv_gap, abs(approx - (x - u) ** 2 / 4.0))

    rng = np.random.default_rng(SEED + 6)
    consistent = True
    for name, box, cbox in [("burg", (0.2, 3.0), (-3.0, -0.2)),
                            ("boltzmann_shannon", (0.2, 3.0), (-2.0, 2.0)),
                            ("quadratic", (-3.0, 3.0), (-3.0, 3.0))]:
        phi = functions.from_name(name)
        Aop = SubdifferentialOp(phi)
        sample = oracle.sample_graph(Aop, oracle.default_box(Aop), 1025)
        for _ in range(5):
            q = DualPair([rng.uniform(*box)], [rng.uniform(*cbox)])
            for method in bounds.FY_METHODS:
                b = bounds.fy_bound_dispatch(phi, None, q, 1.0, method)
                rep = oracle.verify_bound(b, sample, 1e-6, p=q,
                                          max_refinements=6)
                consistent &= rep["status"] == "consistent"
    _report(6, "oracle consistency",
            mono and conv_gap <= 1e-3 and consistent,
            f"monotone={mono}, convergence gap {conv_gap:.2e}, "
            f"all bounds below sampled supremum={consistent}")


def test_7_kt_gauge():
    """Primal-dual gauge: zero at the constructed solution, responsive to
    displacement, and identical through the product-space assembly."""
    L = np.array([[1.0, 0.5], [0.0, 1.0]])
    x_bar = np.array([1.0, -2.0])
    y_bar = np.array([0.5, 1.5])
    inst = linear_quadratic_kt_instance(x_bar, y_bar, L)

    at_sol = kt_gauge_bound(inst, x_bar, y_bar).value
    displaced = kt_gauge_bound(inst, x_bar + 0.1, y_bar + 0.1).value
    stacked = stacked_inclusion(inst)
    agree = 0.0
    for shift in (0.0, 0.1, -0.5, 1.0):
        direct = kt_gauge_bound(inst, x_bar + shift, y_bar + shift).value
        assembled = theta_bound(
            stacked, np.concatenate([x_bar + shift, y_bar + shift])
        ).value
        agree = max(agree, abs(direct - assembled))
    _report(7, "KT gauge",
            at_sol <= 1e-9 and displaced >= 1e-4 and agree <= 1e-10,
            f"gauge at solution {at_sol:.2e}, displaced {displaced:.2e}, "
            f"assembly gap {agree:.2e}")


def test_8_solver_contracts():
    """Lambert W round-trip, resolvent residual contract, and
    finite-difference agreement of catalog gradients."""
    worst_lam = 0.0
    for t in np.concatenate([[0.0], np.logspace(-12, 6, 400)]):
        w = lambert_w(t)
        worst_lam = max(worst_lam, abs(w * math.exp(w) - t) / (1.0 + t))

    rng = np.random.default_rng(SEED + 8)
    worst_res = 0.0
    pairs = [
        (GradientOp(functions.burg()), SubdifferentialOp(functions.burg()),
         (-5.0, -0.1)),
        (GradientOp(functions.fermi_dirac()),
         SubdifferentialOp(functions.boltzmann_shannon()), (-3.0, 3.0)),
        (identity(1), SubdifferentialOp(functions.boltzmann_shannon()),
         (-5.0, 5.0)),
        (AffineOp([[2.0]]), AffineOp([[1.0]], [0.5]), (-5.0, 5.0)),
    ]
    for W, A, rbox in pairs:
        for gamma in (0.5, 1.0, 2.0):
            for _ in range(30):
                rhs = np.array([rng.uniform(*rbox)])
                z = solve_resolvent(ResolventProblem(W, A, gamma, rhs))
                res = resolvent_residual(W, A, gamma, z, rhs)
                worst_res = max(worst_res, res / (1.0 + abs(rhs[0])))

    h = 1e-6
    worst_fd = 0.0
    boxes = {"quadratic": (-4.0, 4.0), "burg": (0.1, 4.0),
             "boltzmann_shannon": (0.1, 4.0), "fermi_dirac": (0.02, 0.98)}
    for name, (lo, hi) in boxes.items():
        f = functions.from_name(name)
        for t in np.linspace(lo + 2 * h, hi - 2 * h, 60):
            fd = (f([t + h]) - f([t - h])) / (2 * h)
            worst_fd = max(worst_fd, abs(f.gradient([t])[0] - fd))

    _report(8, "solver contracts",
            worst_lam <= 1e-13 and worst_res <= 1e-10 and worst_fd <= 1e-5,
            f"Lambert round-trip {worst_lam:.2e}, residual {worst_res:.2e}, "
            f"gradient FD {worst_fd:.2e}")
