"""Seeded validation suites for the spectral theorem and its corollaries.

Every suite draws all randomness from ``(seed, trial index)``, runs its
trials independently and folds them into a :class:`SuiteReport`.  A trial
fails when its residual exceeds the suite tolerance; failures are recorded
with their trial seed, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qspace import (
    QOperator,
    adjoint,
    compose,
    inner,
    operator_norm_fro,
    random_normal,
    random_unitary,
    random_vector,
)
from .quaternion import Quaternion, complete_frame, conjugate_by, conjugator, inv, modulus
from .spectral import (
    AxSymSet,
    evaluate,
    poly_apply,
    poly_on_sphere,
    probe_identity,
    q_residual,
    random_poly,
    reconstruct,
    restrict,
    spectral_measure,
    spherical_spectrum,
    tjb_decompose,
)

PROFILE_CYCLE = ("generic", "clustered", "real")

DEFAULT_TOLERANCES = {
    "fuglede": 1e-8,
    "fuglede_putnam": 1e-8,
    "slice_independence": 1e-8,
    "measure_axioms": 1e-9,
    "theorem": 1e-8,
    "post_theorem_lemma": 1e-9,
    "spectrum_oracle": 1e-7,
}

OFF_SPECTRUM_DISTANCE = 0.1
OFF_SPECTRUM_FLOOR = 1e-4


@dataclass
class SuiteReport:
    name: str
    n: int
    seed: int
    trials: int
    tolerance: float
    worst: float = 0.0
    failures: list = field(default_factory=list)
    components: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, trial: int, trial_seed: int, residual: float, ok: bool, **parts) -> None:
        self.worst = max(self.worst, residual)
        for key, val in parts.items():
            prev = self.components.get(key)
            if key.endswith("_min"):
                self.components[key] = val if prev is None else min(prev, val)
            else:
                self.components[key] = val if prev is None else max(prev, val)
        if not ok:
            self.failures.append({"trial": trial, "seed": trial_seed, "residual": residual})

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "worst": self.worst,
            "passed": self.passed,
            "failures": self.failures,
            "components": dict(sorted(self.components.items())),
        }


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(trial)]).generate_state(1)[0])


def _new_report(name, n, seed, trials, tol) -> SuiteReport:
    return SuiteReport(name, n, seed, trials, DEFAULT_TOLERANCES[name] if tol is None else float(tol))


def _trial(seed: int, t: int):
    ts = trial_seed(seed, t)
    return ts, np.random.default_rng(ts), PROFILE_CYCLE[t % len(PROFILE_CYCLE)]


def _random_frame(rng):
    v = rng.standard_normal(3)
    return complete_frame(Quaternion(0.0, *(v / np.linalg.norm(v))))


def _random_union(E, rng) -> AxSymSet:
    """Neighbourhood of a random subset of atom spheres, excluding the others."""
    spheres = E.spheres
    if len(spheres) > 1:
        gap = min(a.distance(b) for k, a in enumerate(spheres) for b in spheres[k + 1 :])
    else:
        gap = 1.0
    chosen = [s for s in spheres if rng.random() < 0.5]
    return AxSymSet.around(chosen, 0.25 * gap)


def _rel(num: float, den: float) -> float:
    return num / den if den > 0 else num


# ---------------------------------------------------------------------------


def fuglede_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None) -> SuiteReport:
    """``S`` commuting with ``T`` commutes with every ``E(Omega)``.

    ``S`` is a random real polynomial of degree at most 3 in ``T, T*``.
    """
    report = _new_report("fuglede", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        S = poly_apply(T, random_poly(rng, int(rng.integers(0, 4))))
        E = spectral_measure(T)
        sn = operator_norm_fro(S)
        hyp = _rel(operator_norm_fro(compose(S, T) - compose(T, S)), sn * operator_norm_fro(T))
        res = 0.0
        for P in [a.projection for a in E.atoms] + [evaluate(E, _random_union(E, rng))]:
            res = max(res, _rel(operator_norm_fro(compose(S, P) - compose(P, S)), sn))
        report.record(t, ts, res, res <= report.tolerance, hypothesis=hyp, commutator=res)
    return report


def fuglede_putnam_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None) -> SuiteReport:
    """``T1 S = S T2`` with normal ``T1, T2`` implies ``T1* S = S T2*``.

    ``T2 = V* T1 V`` and ``S = p(T1) V`` intertwine by construction; a
    generic random ``S`` would almost never satisfy the hypothesis.
    """
    report = _new_report("fuglede_putnam", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T1 = random_normal(n, rng, prof)
        V = random_unitary(n, rng)
        T2 = compose(compose(adjoint(V), T1), V)
        S = compose(poly_apply(T1, random_poly(rng, int(rng.integers(0, 4)))), V)
        scale = operator_norm_fro(T1) * operator_norm_fro(S)
        hyp = _rel(operator_norm_fro(compose(T1, S) - compose(S, T2)), scale)
        res = _rel(operator_norm_fro(compose(adjoint(T1), S) - compose(S, adjoint(T2))), scale)
        report.record(t, ts, res, res <= report.tolerance, hypothesis=hyp, adjoint_intertwining=res)
    return report


def slice_independence_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None) -> SuiteReport:
    """Measures built in two random slices agree atom by atom.

    Spheres are frame free, so the set map ``omega -> s^{-1} omega s`` is
    the identity on axially symmetric sets; the conjugator ``s`` between
    the two frames' units is checked separately.
    """
    report = _new_report("slice_independence", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        f1, f2 = _random_frame(rng), _random_frame(rng)
        E1, E2 = spectral_measure(T, f1), spectral_measure(T, f2)
        s = conjugator(f1.i, f2.i)
        conj_err = modulus(conjugate_by(f1.i, inv(s)) - f2.i)
        thresh = 1e-7 * max(operator_norm_fro(T), 1.0)
        diff, matched = 0.0, len(E1.atoms) == len(E2.atoms)
        for a in E1.atoms:
            partners = [b for b in E2.atoms if a.sphere.distance(b.sphere) <= thresh]
            if len(partners) != 1:
                matched = False
                continue
            diff = max(diff, operator_norm_fro(a.projection - partners[0].projection))
        res = diff if matched else math.inf
        report.record(
            t, ts, res, matched and res <= report.tolerance,
            projection_difference=diff, conjugator=conj_err,
        )
    return report


def measure_axiom_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None) -> SuiteReport:
    """Projection-valued measure axioms over random unions of atoms."""
    report = _new_report("measure_axioms", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        E = spectral_measure(T)
        I = QOperator.identity(n)
        parts = dict(E.axiom_residuals())
        parts["empty"] = operator_norm_fro(evaluate(E, AxSymSet.empty()))
        parts["full"] = operator_norm_fro(evaluate(E, AxSymSet.everything()) - I)
        O1, O2 = _random_union(E, rng), _random_union(E, rng)
        P1, P2 = evaluate(E, O1), evaluate(E, O2)
        parts["union_projection"] = max(
            operator_norm_fro(compose(P1, P1) - P1), operator_norm_fro(adjoint(P1) - P1)
        )
        parts["multiplicativity"] = operator_norm_fro(evaluate(E, O1 & O2) - compose(P1, P2))
        labels = rng.integers(0, 3, size=len(E.atoms))
        groups = [
            AxSymSet.around([a.sphere for a, g in zip(E.atoms, labels) if g == k], 1e-9)
            for k in range(3)
        ]
        whole = groups[0] | groups[1] | groups[2]
        parts["additivity"] = operator_norm_fro(
            evaluate(E, whole) - sum((evaluate(E, g) for g in groups[1:]), evaluate(E, groups[0]))
        )
        res = max(parts.values())
        report.record(t, ts, res, res <= report.tolerance, **parts)
    return report


def theorem_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None, probes: int = 20) -> SuiteReport:
    """Reconstruction ``T = sum P_k re_k + J P_k rad_k`` and its scalar form."""
    report = _new_report("theorem", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        E = spectral_measure(T)
        tjb = tjb_decompose(T, measure=E)
        tn = operator_norm_fro(T)
        recon = _rel(operator_norm_fro(reconstruct(E, tjb.J) - T), tn)
        probe = 0.0
        poly = 0.0
        P = random_poly(rng, 2)
        pT = poly_apply(T, P)
        G = compose(adjoint(pT), pT)
        for _ in range(probes):
            x, y = random_vector(n, rng), random_vector(n, rng)
            lhs, rhs = probe_identity(T, E, tjb.J, x, y)
            probe = max(probe, _rel(modulus(lhs - rhs), tn * x.norm() * y.norm()))
            g = inner(G @ x, x)
            s = sum(poly_on_sphere(P, a.sphere) ** 2 * inner(a.projection @ x, x).a for a in E.atoms)
            poly = max(poly, _rel(modulus(g - s), operator_norm_fro(G) * x.norm() ** 2))
        res = max(recon, probe, poly)
        report.record(
            t, ts, res, res <= report.tolerance,
            reconstruction=recon, probe_identity=probe, polynomial_identity=poly,
        )
    return report


def post_theorem_lemma_suite(n: int = 8, seed: int = 0, trials: int = 50, tol=None) -> SuiteReport:
    """Atoms are nonzero, commute with ``T``, and localise the spectrum.

    The restricted-spectrum distance is measured relative to ``||T||_F``.
    """
    report = _new_report("post_theorem_lemma", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        E = spectral_measure(T)
        tn = operator_norm_fro(T)
        smallest = min(operator_norm_fro(a.projection) for a in E.atoms)
        comm = dist = 0.0
        omegas = [AxSymSet.around([a.sphere], 1e-9) for a in E.atoms]
        omegas += [_random_union(E, rng) for _ in range(3)]
        for omega in omegas:
            P = evaluate(E, omega)
            comm = max(comm, _rel(operator_norm_fro(compose(P, T) - compose(T, P)), tn))
            inside = [a.sphere for a in E.atoms if omega.contains(a.sphere)]
            if not inside:
                continue
            sub = spherical_spectrum(restrict(T, P))
            for s, _ in sub:
                dist = max(dist, _rel(min(s.distance(u) for u in inside), tn))
        res = max(comm, dist)
        ok = smallest >= 0.5 and res <= report.tolerance
        report.record(
            t, ts, res, ok,
            atom_norm_min=smallest, commutator=comm, restricted_spectrum=dist,
        )
    return report


def spectrum_oracle_suite(
    n: int = 8, seed: int = 0, trials: int = 50, tol=None, on_points: int = 5, off_points: int = 20
) -> SuiteReport:
    """Eigensolver spheres against the ``Q_q(T)`` invertibility definition.

    Residuals are divided by ``||T||_F^2``.  On-sphere points must give a
    scaled residual ``<= tol``; points at half-plane distance at least 0.1
    from every sphere must stay ``>= 1e-4``.
    """
    report = _new_report("spectrum_oracle", n, seed, trials, tol)
    for t in range(trials):
        ts, rng, prof = _trial(seed, t)
        T = random_normal(n, rng, prof)
        spec = spherical_spectrum(T)
        scale = max(operator_norm_fro(T) ** 2, 1.0)
        on = 0.0
        for s, _ in spec:
            for _ in range(on_points):
                u = rng.standard_normal(3)
                u /= np.linalg.norm(u)
                q = Quaternion(s.re, *(s.rad * u))
                on = max(on, q_residual(T, q) / scale)
        off = math.inf
        hi = max(abs(s.re) + s.rad for s, _ in spec) + 1.0
        drawn = 0
        while drawn < off_points:
            re_, rad = rng.uniform(-hi, hi), rng.uniform(0.0, hi)
            if spec.distance(Quaternion(re_, rad)) < OFF_SPECTRUM_DISTANCE:
                continue
            u = rng.standard_normal(3)
            u /= np.linalg.norm(u)
            off = min(off, q_residual(T, Quaternion(re_, *(rad * u))) / scale)
            drawn += 1
        ok = on <= report.tolerance and off >= OFF_SPECTRUM_FLOOR
        report.record(t, ts, on, ok, on_spectrum=on, off_spectrum_min=off)
    return report


SUITES = {
    "fuglede": fuglede_suite,
    "fuglede_putnam": fuglede_putnam_suite,
    "slice_independence": slice_independence_suite,
    "measure_axioms": measure_axiom_suite,
    "theorem": theorem_suite,
    "post_theorem_lemma": post_theorem_lemma_suite,
}

#: run on request only; a few hundred Jacobi solves per trial
EXTRA_SUITES = {
    "spectrum_oracle": spectrum_oracle_suite,
}


def run_all(n: int = 8, seed: int = 0, trials: int = 50, tol=None, suites=None) -> list[SuiteReport]:
    """Run the named suites (default: all of :data:`SUITES`) in order."""
    table = {**SUITES, **EXTRA_SUITES}
    names = list(SUITES) if suites is None else list(suites)
    return [table[name](n=n, seed=seed, trials=trials, tol=tol) for name in names]
