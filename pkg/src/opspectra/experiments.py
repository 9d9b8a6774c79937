"""One function per CLI subcommand.

Each returns an :class:`Outcome`; the CLI turns it into JSON
``{config, results, verdict, tolerances}`` or into a CSV table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bernstein as bn
from . import ccr, finitevn, quanta, spectral, waveline
from .errors import InputError, SingularityError
from .numkernel import operator_norm, random_cmat, random_hermitian, trace


@dataclass
class Outcome:
    results: dict
    verdict: bool
    tolerances: dict
    header: list | None = None
    rows: list = field(default_factory=list)


def _require_positive(**counts) -> None:
    for name, v in counts.items():
        if v < 1:
            raise InputError(f"{name} must be >= 1, got {v}")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; sub-streams come from SeedSequence.spawn."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


# -- quanta ---------------------------------------------------------------

def balmer(k=2, l_max=7, paper_compat=False, tol=1.0):
    if l_max <= k:
        raise InputError(f"l_max must exceed k, got k={k}, l_max={l_max}")
    lines = quanta.balmer_table(k, l_max, paper_compat)
    ryd = quanta.rydberg()
    ok = abs(ryd - quanta.RYDBERG_PRINTED) <= 0.05
    if k == 2:
        for line, want in zip(lines, quanta.COMPUTED_BALMER_ANGSTROM):
            ok &= abs(line.wavelength_angstrom - want) <= tol
    rows = [(r.k, r.l, r.wave_number, r.wavelength_angstrom) for r in lines]
    return Outcome(
        {"rydberg_per_cm": ryd, "lines": [dict(k=r[0], l=r[1], wave_number_per_cm=r[2],
                                               wavelength_angstrom=r[3]) for r in rows],
         "observed_angstrom": list(quanta.OBSERVED_BALMER_ANGSTROM)},
        bool(ok), {"wavelength_angstrom": tol, "rydberg_per_cm": 0.05},
        ["k", "l", "wave_number_per_cm", "wavelength_angstrom"], rows)


def planck(temp=5000.0, lambda_min=1e-6, lambda_max=1e-2, points=400):
    if points < 3 or not 0 < lambda_min < lambda_max:
        raise InputError("need points >= 3 and 0 < lambda_min < lambda_max")
    lam = np.geomspace(lambda_min, lambda_max, points)
    p = quanta.planck_density(lam, temp)
    rj = quanta.rayleigh_jeans_density(lam, temp)
    below = bool(np.all(p <= rj * (1 + 1e-12)))
    peaks = int(np.sum((p[1:-1] > p[:-2]) & (p[1:-1] > p[2:])))
    rows = list(zip(lam, p, rj, p / rj))
    return Outcome({"planck_below_rayleigh_jeans": below, "interior_maxima": peaks,
                    "peak_lambda_cm": float(lam[int(np.argmax(p))])},
                   below and peaks == 1, {"ratio_slack": 1e-12},
                   ["lambda_cm", "planck", "rayleigh_jeans", "ratio"], rows)


def debroglie(mass=None, speed=None):
    c = quanta.HISTORICAL
    mass = c.m_e if mass is None else mass
    speed = c.c / 3.0 if speed is None else speed
    lam = quanta.de_broglie_wavelength(mass, speed)
    ang = lam * quanta.ANGSTROM_PER_CM
    return Outcome({"mass_g": mass, "speed_cm_per_s": speed, "wavelength_cm": lam,
                    "wavelength_angstrom": ang},
                   abs(ang - 0.0727) <= 5e-4 if (mass == c.m_e and speed == c.c / 3.0) else True,
                   {"wavelength_angstrom": 5e-4})


def bohr(k_max=5):
    _require_positive(k_max=k_max)
    orbits = [quanta.bohr_orbit(k) for k in range(1, k_max + 1)]
    r1, e1 = orbits[0].radius, orbits[0].energy
    ok = all(abs(o.radius / r1 - o.k ** 2) <= 1e-12 * o.k ** 2
             and abs(o.energy * o.k ** 2 - e1) <= 1e-12 * abs(e1) for o in orbits)
    rows = [(o.k, o.radius, o.energy) for o in orbits]
    return Outcome({"orbits": [dict(k=o.k, radius_cm=o.radius, energy_erg=o.energy) for o in orbits]},
                   ok, {"scaling_rel": 1e-12}, ["k", "radius_cm", "energy_erg"], rows)


# -- ccr -------------------------------------------------------------------

def ccr_obstruction(rng, n=8, trials=200, hbar=1.0, tol=1e-9):
    _require_positive(n=n, trials=trials)
    worst, min_defect = 0.0, np.inf
    for _ in range(trials):
        a, b = random_cmat(rng, n), random_cmat(rng, n)
        rep = ccr.trace_obstruction(a, b, hbar)
        worst = max(worst, abs(rep.commutator_trace) / (n * operator_norm(a) * operator_norm(b)))
        min_defect = min(min_defect, rep.defect_norm, rep.defect_norm_minus)
    return Outcome({"max_scaled_trace": worst, "min_defect_norm": min_defect, "hbar": hbar},
                   worst <= tol and min_defect >= hbar * (1 - 1e-12),
                   {"trace_per_n_norm_product": tol})


def spectrum_symmetry(rng, n=8, trials=50, tol=1e-9):
    _require_positive(n=n, trials=trials)
    worst, root_gap = 0.0, 0.0
    for _ in range(trials):
        rep = ccr.spectrum_symmetry_check(random_cmat(rng, n), random_cmat(rng, n), tol)
        worst = max(worst, rep.max_coeff_gap)
        root_gap = max(root_gap, rep.max_root_gap)
    return Outcome({"max_coeff_gap": worst, "max_root_gap": root_gap}, worst <= tol,
                   {"coeff_rel": tol})


def wielandt(rng, n=8, trials=50, tol=1e-9):
    _require_positive(n=n, trials=trials)
    worst, skipped = 0.0, 0
    for _ in range(trials):
        a, b = random_cmat(rng, n), random_cmat(rng, n)
        try:
            r = ccr.wielandt_residuals(a, b)
        except SingularityError:
            skipped += 1
            continue
        worst = max(worst, max(r["left"], r["right"]) / r["cond"])
    return Outcome({"max_residual_over_cond": worst, "skipped_singular": skipped},
                   worst <= tol, {"residual_per_cond": tol})


def oscillator_truncation(n_max=64, hbar=1.0, tol=1e-12):
    if n_max < 2:
        raise InputError("n_max must be >= 2")
    rows, ok = [], True
    for n in range(2, n_max + 1):
        pair = ccr.truncated_canonical_pair(n, hbar)
        c = pair.q @ pair.p - pair.p @ pair.q
        d = c - 1j * hbar * np.eye(n)
        corner = d[n - 1, n - 1]
        off = d.copy()
        off[n - 1, n - 1] = 0
        rest = float(np.max(np.abs(off)))
        tr = abs(trace(c))
        ok &= abs(corner + 1j * hbar * n) <= tol and rest <= tol and tr <= tol
        rows.append((n, corner.real, corner.imag, rest, tr))
    return Outcome({"levels_checked": n_max - 1}, bool(ok), {"entry_abs": tol},
                   ["n", "corner_re", "corner_im", "max_offcorner", "abs_trace"], rows)


def truncation_identity(n=64, left=-4.0, right=4.0, mode="spectral", cutoffs=(5, 10, 20)):
    p = waveline.momentum_matrix(left, right, n, mode)
    q = waveline.position_matrix(left, right, n)
    table = ccr.truncation_identity_check(p, q, cutoffs)
    rows = [(r.cutoff, r.rank, r.residual, abs(r.trace_cut_commutator), r.scale) for r in table]
    return Outcome({"cutoffs": [dict(cutoff=r[0], rank=r[1], residual=r[2], abs_trace=r[3])
                                for r in rows], "scale": table[0].scale},
                   all(r.passed for r in table),
                   {"residual_rel": ccr.TRUNCATION_TOL, "trace_rel": ccr.TRACE_TOL},
                   ["cutoff", "rank", "residual", "abs_trace", "scale"], rows)


def preclosed_demo(m_max=10, dim=20):
    table, _ = ccr.preclosed_failure_demo(m_max, dim)
    rows = [(r.m, float(r.u_norm), float(r.image_gap)) for r in table]
    ok = all(r.image_gap == 0 and r.u_norm == Fraction(1, r.m) for r in table)
    return Outcome({"rows": [dict(m=m, u_norm=u, image_gap=g) for m, u, g in rows]}, ok,
                   {"image_gap": 0.0}, ["m", "u_norm", "image_gap"], rows)


# -- waveline --------------------------------------------------------------

def _gaussian(left, right, n):
    return waveline.GridFunction.sample(lambda s: np.exp(-s ** 2), left, right, n)


def _step(left, right, n):
    return waveline.GridFunction.sample(lambda s: (s >= 0).astype(float), left, right, n)


def grid_heisenberg(n=256, mode="spectral", left=-10.0, right=10.0, tol=None):
    r = waveline.heisenberg_residual(_gaussian(left, right, n), mode)
    if mode == "spectral":
        tol = 1e-8 if tol is None else tol
        return Outcome({"residual": r}, r <= tol, {"residual": tol})
    r2 = waveline.heisenberg_residual(_gaussian(left, right, 2 * n), mode)
    ratio = r / r2
    return Outcome({"residual": r, "residual_doubled": r2, "ratio": ratio},
                   abs(ratio - 4.0) <= 0.4, {"ratio_target": 4.0, "ratio_abs": 0.4})


def jump_profile(grid=4096, left=-2.0, right=2.0):
    rows = waveline.jump_blowup_profile(_step(left, right, grid), 0.0)
    if not rows:
        raise InputError("grid too coarse: no n has t_n >= 2h")
    ok = all(r.squared_norm >= r.bound for r in rows)
    return Outcome({"rows_checked": len(rows), "max_squared_norm": rows[-1].squared_norm},
                   ok, {"bound": "n - 2 + 1/n"}, ["n", "t_n", "squared_norm", "bound"],
                   [(r.n, r.t_n, r.squared_norm, r.bound) for r in rows])


def domain_diagnostic(function="gaussian", n=1024, left=-10.0, right=10.0):
    if function == "gaussian":
        f = _gaussian(left, right, n)
        g = waveline.GridFunction.sample(lambda s: -2 * s * np.exp(-s ** 2), left, right, n)
        expected = "converging"
    elif function == "step":
        f, g, expected = _step(left, right, n), None, "blowing_up"
    else:
        f = waveline.GridFunction(left, right, np.zeros(n))
        g, expected = None, "converging"
    d = waveline.difference_quotient_diagnostic(f, g)
    return Outcome({"classification": d.verdict, "blowup_exponent": d.blowup_exponent,
                    "note": d.heuristic},
                   d.verdict == expected, {"slope_cut": waveline.BLOWUP_SLOPE,
                                           "monotone_slack": waveline.MONOTONE_SLACK},
                   ["t", "residual", "quotient_norm"],
                   list(zip(d.t_samples, d.residuals, d.quotient_norms)))


def volterra(rng, n=256, trials=100):
    _require_positive(trials=trials)
    worst = 0.0
    h = 1.0 / n
    for _ in range(trials):
        f = waveline.GridFunction(0.0, 1.0, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        worst = max(worst, waveline.volterra_apply(f).norm() / f.norm())
    return Outcome({"max_norm_ratio": worst}, worst <= 1 + 5 * h, {"bound": 1 + 5 * h})


def _trig_poly(rng, n, terms=4):
    s = np.arange(n) / n
    v = np.zeros(n, dtype=np.complex128)
    for m in range(1, terms + 1):
        c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v += c[0] * np.cos(2 * np.pi * m * s) + c[1] * np.sin(2 * np.pi * m * s)
    return waveline.project_out_constant(waveline.GridFunction(0.0, 1.0, v))


def d3_skew(rng, n=256, trials=100, tol=1e-6):
    _require_positive(trials=trials)
    worst = 0.0
    for _ in range(trials):
        f1, f2 = _trig_poly(rng, n), _trig_poly(rng, n)
        a1, a2 = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        val = waveline.d3_skewness_check(f1, f2, a1, a2)
        u = waveline.constant_unit(f1)
        g1 = waveline.volterra_apply(f1) + u * a1
        g2 = waveline.volterra_apply(f2) + u * a2
        scale = g1.norm() * f2.norm() + f1.norm() * g2.norm()
        worst = max(worst, abs(val) / scale)
    return Outcome({"max_scaled_skew": worst}, worst <= tol, {"skew_rel": tol})


def averaging(function="gaussian", n=1024, left=-10.0, right=10.0, steps=(64, 32, 16, 8, 4, 2, 1)):
    f = _gaussian(left, right, n) if function == "gaussian" else _step(left, right, n)
    ts = [k * f.h for k in steps]
    res = waveline.averaging_convergence(f, ts)
    ok = all(b <= a for a, b in zip(res, res[1:]))
    return Outcome({"residuals": res}, ok, {"monotone": True}, ["t", "residual"], list(zip(ts, res)))


# -- bernstein -------------------------------------------------------------

BERNSTEIN_FUNCTIONS = {
    "x2": (lambda x: x ** 2, lambda x: 2 * x),
    "x3": (lambda x: x ** 3, lambda x: 3 * x ** 2),
    "sin": (lambda x: np.sin(np.pi * x) / np.pi, lambda x: np.cos(np.pi * x)),
}


def bernstein_approx(function="sin", n=40):
    f, fp = BERNSTEIN_FUNCTIONS[function]
    e, de = bn.uniform_error(f, fp, n)
    e2, de2 = bn.uniform_error(f, fp, 2 * n)
    return Outcome({"sup_err": e, "sup_deriv_err": de, "sup_err_2n": e2, "sup_deriv_err_2n": de2},
                   e2 < e and de2 < de, {"strict_decrease": True},
                   ["x", "f", "Bn", "fprime", "Bn_prime"], bn.approximant_table(f, fp, n))


def bernstein_identities(n=10, xs=(0.5,)):
    rep = bn.moment_identities_check(n, xs)
    vals = {k: [dict(x=x, direct=d, closed=c) for x, d, c in v] for k, v in rep.values.items()}
    return Outcome({"max_gap": rep.max_gap, "values": vals}, rep.passed(),
                   {"gap_per_degree": 1e-10})


# -- spectral --------------------------------------------------------------

def spectral_decompose(rng, n=8, trials=20, tol=1e-9):
    _require_positive(n=n, trials=trials)
    worst = {}
    for _ in range(trials):
        a = random_hermitian(rng, n)
        rep = spectral.resolution_report(a)
        rep["eigen_reconstruction"] = float(
            np.max(np.abs(spectral.hermitian_eigen(a).reconstruct() - a))) / operator_norm(a)
        for k, v in rep.items():
            # order gaps are signed minima; everything else is a magnitude
            worst[k] = min(worst.get(k, 0.0), v) if k.startswith("order") else max(worst.get(k, 0.0), abs(v))
    ok = (worst["reconstruction"] <= tol and worst["eigen_reconstruction"] <= tol
          and all(worst[k] <= 1e-10 for k in ("bounds", "idempotent", "monotone", "right_continuity"))
          and worst["order_lower"] >= -tol and worst["order_upper"] >= -tol)
    return Outcome(worst, ok, {"reconstruction_rel": tol, "order": tol, "projection": 1e-10})


def polar(rng, n=8, trials=20, tol=1e-9):
    _require_positive(n=n, trials=trials)
    worst = {}
    for i in range(trials):
        # every other draw has rank about n/2 so the null spaces are nontrivial
        t = random_cmat(rng, n) if i % 2 == 0 else random_cmat(rng, n, max(1, n // 2)) @ random_cmat(rng, max(1, n // 2), n)
        rep = spectral.polar_report(t)
        rep.update(spectral.rn_identity_gaps(t))
        for k, v in rep.items():
            worst[k] = max(worst.get(k, 0.0), v)
    return Outcome(worst, all(v <= tol for v in worst.values()), {"gap": tol})


# -- finitevn --------------------------------------------------------------

def vn_lattice(rng, blocks=(2, 3, 4), trials=200, tol=1e-8):
    _require_positive(trials=trials)
    alg = finitevn.BlockAlgebra(blocks)
    worst_id, worst_w, dominated = 0.0, 0.0, True
    for _ in range(trials):
        e, f = alg.random_projection(rng), alg.random_projection(rng)
        join, meet = finitevn.lattice_ops(e, f)
        lhs = finitevn.dimension_function(join) + finitevn.dimension_function(meet)
        rhs = finitevn.dimension_function(e) + finitevn.dimension_function(f)
        worst_id = max(worst_id, float(np.max(np.abs(lhs.as_array() - rhs.as_array()))))
        ranks = finitevn.block_ranks(e)
        f2 = alg.random_projection(rng, ranks)
        v = finitevn.equivalence_witness(e, f2)
        w = finitevn.complement_equivalence(e, f2)
        one = alg.identity()
        worst_w = max(worst_w, *finitevn.witness_gaps(v, e, f2),
                      *finitevn.witness_gaps(w, one - e, one - f2))
        _, rep = finitevn.domain_pullback_projection(alg.random_element(rng), e)
        dominated &= rep["dominated"]
    return Outcome({"max_delta_identity_gap": worst_id, "max_witness_gap": worst_w,
                    "pullback_dominated": dominated},
                   worst_id <= tol and worst_w <= 1e-9 and dominated,
                   {"delta_identity": tol, "witness": 1e-9})


def vn_trace(rng, blocks=(2, 3, 4), trials=200, tol=1e-9):
    _require_positive(trials=trials)
    alg = finitevn.BlockAlgebra(blocks)
    worst, worst_star = 0.0, 0.0
    for _ in range(trials):
        p, q = alg.random_self_adjoint(rng), alg.random_self_adjoint(rng)
        tau = finitevn.center_valued_trace(finitevn.commutator(p, q)).as_array()
        worst = max(worst, float(np.max(np.abs(tau))))
        a = alg.random_element(rng)
        tau2 = finitevn.center_valued_trace(a.adjoint() @ a - a @ a.adjoint()).as_array()
        worst_star = max(worst_star, float(np.max(np.abs(tau2))))
    return Outcome({"max_trace_of_commutator": worst, "max_trace_self_commutator": worst_star},
                   worst <= tol and worst_star <= 1e-10, {"trace": tol, "self_commutator": 1e-10})
