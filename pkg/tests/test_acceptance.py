"""Acceptance criteria 1-9, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line, then asserts.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from fracmin.minimal import Exponents, minimal_plus, minimal_plus_grid, minimal_plus_oracle
from fracmin.rng import (MU_CHOICES, SplitMix64, random_exponents, random_function, random_pair,
                         random_step)
from fracmin.stepfn import INF, Interval, StepFunction, affine, restrict, scale
from fracmin.theorems import (ETAS, check_fmc1, check_fmt2_necessity, check_fmt2_sufficiency,
                              check_fmt4, check_fmt5, log_lambdas, suite_fmt1, suite_fmt3,
                              suite_fml1)
from fracmin.weights import WeightPair, interval_family, sawyer_ratio

UNIT = Interval(0.0, 1.0)
EXPONENTS = [Exponents(mu, p, q) for mu in MU_CHOICES
             for p, q in ((1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (0.5, 1.0))]


@pytest.fixture
def report(capsys):
    def emit(criterion: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
        assert ok, detail
    return emit


def rel_err(a: float, b: float) -> float:
    if a == b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return INF
    return abs(a - b) / max(abs(a), abs(b))


def spawned(seed: int, count: int):
    master = SplitMix64(seed)
    return [master.spawn() for _ in range(count)]


def test_1_oracle_equivalence(report):
    start = time.perf_counter()
    worst, compared = 0.0, 0
    for rng in spawned(101, 500):
        f = random_function(rng)
        xs = np.array([rng.uniform(-0.25, 1.25) for _ in range(20)])
        for mu in MU_CHOICES:
            fast = minimal_plus_grid(f, mu, xs)
            for x, v in zip(xs, fast):
                h_max = f.breakpoints[-1] - x
                slow = minimal_plus_oracle(f, mu, x, h_max, 16) if h_max > 0 else INF
                worst = max(worst, rel_err(v, slow))
                compared += 1
    elapsed = time.perf_counter() - start
    report("1 oracle equivalence", worst <= 1e-9 and elapsed < 60 and compared == 40000,
           f"{compared} evaluations, max rel err {worst:.3g} (<= 1e-9), {elapsed:.1f}s (< 60s)")


def test_2_closed_forms(report):
    errs = {}
    # constants: m_0 = c, m_mu = 0 for mu > 0
    e_const = 0.0
    for c in (1e-3, 0.7, 1.0, 42.0, 1e3):
        f = StepFunction.constant(c)
        for x in (-5.0, 0.0, 0.3, 11.0):
            e_const = max(e_const, rel_err(minimal_plus(f, 0.0, x), c))
            for mu in (0.5, 1.0, 2.0):
                e_const = max(e_const, abs(minimal_plus(f, mu, x)))
    errs["constants"] = (e_const, 1e-12)
    # restriction: m(omega / chi_[0, L])(x) = omega (L - x)^-mu
    e_restr = 0.0
    for w in (0.5, 2.0, 7.0):
        for L in (0.25, 1.0, 3.0):
            g = restrict(StepFunction.constant(w), Interval(0.0, L))
            for mu in MU_CHOICES:
                for x in np.linspace(0.0, L, 9)[:-1]:
                    e_restr = max(e_restr, rel_err(minimal_plus(g, mu, x), w * (L - x) ** -mu))
    errs["restriction"] = (e_restr, 1e-12)
    # testing ratio of the constants pair: 1/(mu q + 1) on |I| = 1, L^(mu q)/(mu q + 1) for p = q
    ones = WeightPair(StepFunction.constant(1.0), StepFunction.constant(1.0))
    e_saw = 0.0
    for e in EXPONENTS:
        got = sawyer_ratio(ones, e, UNIT, tol=1e-9).ratio
        e_saw = max(e_saw, rel_err(got, 1.0 / (e.mu * e.q + 1.0)))
        if e.p == e.q:
            for L in (0.5, 2.0, 5.0):
                got = sawyer_ratio(ones, e, Interval(1.0, 1.0 + L), tol=1e-9).ratio
                e_saw = max(e_saw, rel_err(got, L ** (e.mu * e.q) / (e.mu * e.q + 1.0)))
    errs["testing ratio"] = (e_saw, 1e-6)
    # nested decay T_l = |K_l|^(1 + mu q) / (mu q + 1)
    e_decay = 0.0
    for e in EXPONENTS:
        T = check_fmt5(ones, e, UNIT, 0.5, 12, tol=1e-9).details["T"]
        for l, t in enumerate(T):
            e_decay = max(e_decay, rel_err(t, (0.5 ** l) ** (1 + e.mu * e.q) / (e.mu * e.q + 1)))
    errs["fmt5 decay"] = (e_decay, 1e-6)
    ok = all(err <= tol for err, tol in errs.values())
    report("2 closed forms", ok,
           "; ".join(f"{k} {err:.2g} (<= {tol:g})" for k, (err, tol) in errs.items()))


def test_3_covariance(report):
    worst = {"homogeneity": 0.0, "translation": 0.0, "dilation": 0.0}
    for rng in spawned(303, 200):
        f = random_step(rng, UNIT)
        mu = rng.choice(MU_CHOICES)
        x = rng.uniform(-0.5, 1.5)
        c = rng.log_uniform(1e-3, 1e3)
        t = rng.uniform(-2.0, 2.0)
        s = rng.log_uniform(0.1, 10.0)
        base = minimal_plus(f, mu, x)
        worst["homogeneity"] = max(worst["homogeneity"],
                                   rel_err(minimal_plus(scale(f, c), mu, x), c * base))
        worst["translation"] = max(worst["translation"],
                                   rel_err(minimal_plus(affine(f, 1.0, t), mu, x - t), base))
        worst["dilation"] = max(worst["dilation"],
                                rel_err(minimal_plus(affine(f, s, 0.0), mu, x / s), s ** mu * base))
    report("3 covariance", max(worst.values()) <= 1e-9,
           "200 cases, max rel err " + ", ".join(f"{k} {v:.2g}" for k, v in worst.items())
           + " (<= 1e-9)")


def test_4_covering_lemma(report):
    results = [r for r in suite_fml1(404, 200) if r.witness["instance"].startswith("random")]
    failed = [r for r in results if not r.passed]
    report("4 fml1", len(results) == 200 and not failed,
           f"{len(results)} random families, {len(failed)} violations of the 2^(1+mu) union bound, "
           f"min slack {min(r.slack for r in results):.3g}")


def _n0_rule(eta: float) -> int:
    target = Fraction(eta)
    n = 1
    while target > 1 - Fraction(1, 2 ** n):
        n += 1
    return n


def test_5_fmt1(report):
    res = [r for r in suite_fmt1(505, 100) if r.witness["instance"].startswith("random")]
    forward = [r for r in res if r.name == "fmt1.forward"]
    cases = [r for r in res if r.name.startswith("fmt1.case")]
    identity = max(r.details["identity_residual"] for r in forward)
    failed = [r for r in res if not r.passed]
    etas = {r.witness["eta"] for r in cases}
    n0_bad = [r for r in cases if r.name == "fmt1.caseII"
              and r.details["N0"] != _n0_rule(r.witness["eta"])]
    ok = (len(forward) == len(cases) == 100 and identity <= 1e-12 and not failed
          and set(ETAS) <= etas and not n0_bad)
    report("5 fmt1", ok,
           f"{len(cases)} (pair, eta) instances incl. eta in {ETAS}; identity residual "
           f"{identity:.2g} (<= 1e-12); {len(failed)} failures; "
           f"{sum(r.name == 'fmt1.caseII' for r in cases)} Case II N0 values, {len(n0_bad)} mismatches")


def test_6_fmt2(report):
    nec_total, nec_failed, suff_failed, flagged, silent = 0, 0, 0, 0, 0
    min_nec_slack = INF
    for rng in spawned(606, 50):
        pair = random_pair(rng)
        e = random_exponents(rng)
        family = interval_family(UNIT, pair, 1)
        for I in family:
            r = check_fmt2_necessity(pair, e, I)
            nec_total += 1
            nec_failed += not r.passed
            min_nec_slack = min(min_nec_slack, r.slack)
        f = random_function(rng)
        lams = log_lambdas(f, e.mu, 5)
        r = check_fmt2_sufficiency(pair, e, f, lams, UNIT, family=family)
        suff_failed += not r.passed
        flagged += r.flagged
        # a failure must always come with a flag naming the violated condition
        silent += (not r.passed) and not r.flagged
    ok = nec_failed == 0 and silent == 0
    report("6 fmt2", ok,
           f"necessity on {nec_total} family intervals of 50 pairs: {nec_failed} failures, "
           f"min slack {min_nec_slack:.3g}; sufficiency over 5 lambdas: {suff_failed} failures, "
           f"{flagged} flagged, {silent} silent")


def test_7_fmt3(report):
    res = [r for r in suite_fmt3(707, 20) if r.witness["instance"].startswith("random")]
    ident = max(c.lhs for r in res for c in r.conditions if c.label.startswith("strong = testing"))
    generic = [g for r in res for g in r.details["generic_ratios"]]
    finite = all(isinstance(g, float) and math.isfinite(g) for g in generic)
    needed = [r.details["envelope_needed"] for r in res]
    ok = len(res) == 20 and len(generic) == 100 and ident <= 1e-9 and finite and all(r.passed for r in res)
    report("7 fmt3", ok,
           f"substitution residual {ident:.2g} (<= 1e-9); {len(generic)} generic ratios finite={finite}; "
           f"recorded envelope ratio/constant range [{min(needed):.3g}, {max(needed):.3g}]")


def test_8_fmt4_fmt5_fmc1(report):
    eps_resid, decay_worst, fmt5_fail = 0.0, 0.0, 0
    for rng in spawned(808, 50):
        pair = random_pair(rng)
        e = random_exponents(rng)
        r4 = check_fmt4(pair, e, UNIT)
        c = r4.conditions[0]
        eps_resid = max(eps_resid, c.lhs / (c.rhs / 1e-12))
        r5 = check_fmt5(pair, e, UNIT, 0.5, 20)
        fmt5_fail += not r5.passed
        T = r5.details["T"]
        decay_worst = max(decay_worst, T[-1] / T[0])
    tele_fail, overlap_max, chain_fail = 0, 0, 0
    for rng in spawned(809, 20):
        pair = random_pair(rng)
        e = random_exponents(rng)
        r = check_fmc1(pair, e, UNIT)
        tele_fail += not r.conditions[1].ok
        overlap_max = max(overlap_max, r.details["max_overlap"])
        chain_fail += not r.passed
    ok = eps_resid <= 1e-12 and fmt5_fail == 0 and decay_worst < 1e-3 and tele_fail == 0 \
        and overlap_max <= 2 and chain_fail == 0
    report("8 fmt4/fmt5/fmc1", ok,
           f"eps identity rel residual {eps_resid:.2g} (<= 1e-12); fmt5 on 50 pairs: {fmt5_fail} "
           f"failures, max T_20/T_0 {decay_worst:.3g} (< 1e-3); fmc1 on 20 pairs: telescoping "
           f"failures {tele_fail}, max overlap {overlap_max} (<= 2), chain failures {chain_fail}")


def test_9_determinism(report, tmp_path):
    cmd = [sys.executable, "-m", "fracmin", "verify", "--theorem", "all", "--trials", "20",
           "--seed", "1"]
    runs = [subprocess.run(cmd, capture_output=True, cwd=tmp_path) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout
    parsed = json.loads(runs[0].stdout)
    ok = same and runs[0].returncode in (0, 5) and runs[0].returncode == runs[1].returncode
    report("9 determinism", ok,
           f"two runs byte-identical={same} ({len(runs[0].stdout)} bytes, "
           f"{parsed['summary']['checks']} checks), exit codes {runs[0].returncode}/{runs[1].returncode}")
