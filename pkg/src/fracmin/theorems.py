"""Instance-level checks of the covering lemma and the weighted inequalities.

Each check turns one implication into concrete inequalities ``lhs <= rhs``
built from the explicit constants and witnesses used to prove it.  A check
records every inequality it evaluated; the one with the least slack is
reported as the headline ``lhs``/``rhs``.

Two flavours are distinguished:

* ``exact`` checks follow by substitution or by an identity, so any failure is
  an implementation bug;
* ``envelope`` checks compare against a constant assembled from the factor
  chain of a proof together with family-relative class constants.

Some inequalities are advisory: their failure is flagged but does not fail the
check (see :func:`check_fmt2_sufficiency`).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .minimal import Exponents, minimal_plus_grid, sublevel_set
from .rng import SplitMix64, random_exponents, random_function, random_pair, random_step
from .stepfn import INF, Interval, StepFunction, combine, integrate, integrate_line, restrict
from .weights import (DEFAULT_TOL, Kind, RatioReport, WeightPair, _num, class_constant,
                      eta_factor, left_part, omega, plus_minus, power_product, sawyer_ratio,
                      structural_rhs, testing_integral, wpq_eta_ratio, wpq_ratio)

REL_TOL = 1e-9
STRICT_PERTURB = 1e-9
DECOMP_RESOLUTION = 1e-6


def _le(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + REL_TOL)


def _slack(lhs: float, rhs: float) -> float:
    if lhs == 0 or rhs == INF:
        return INF
    return rhs / lhs


@dataclass
class Condition:
    label: str
    lhs: float
    rhs: float
    advisory: bool = False

    @property
    def ok(self) -> bool:
        return _le(self.lhs, self.rhs)

    @property
    def slack(self) -> float:
        return _slack(self.lhs, self.rhs)

    def to_dict(self) -> dict:
        return {"label": self.label, "lhs": _num(self.lhs), "rhs": _num(self.rhs),
                "slack": _num(self.slack), "ok": self.ok, "advisory": self.advisory}


@dataclass
class CheckResult:
    """Outcome of one check; ``passed`` iff ``lhs <= rhs * (1 + 1e-9)``."""

    name: str
    lhs: float
    rhs: float
    kind: str = "exact"
    witness: dict = field(default_factory=dict)
    params: dict | None = None
    seed: int | None = None
    flags: list[str] = field(default_factory=list)
    conditions: list[Condition] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return _le(self.lhs, self.rhs)

    @property
    def slack(self) -> float:
        return _slack(self.lhs, self.rhs)

    @property
    def flagged(self) -> bool:
        return bool(self.flags)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "passed": self.passed,
            "flagged": self.flagged,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "seed": self.seed,
            "params": self.params,
            "witness": self.witness,
            "flags": self.flags,
            "conditions": [c.to_dict() for c in self.conditions],
            "details": {k: _num(v) if isinstance(v, float) else v for k, v in self.details.items()},
        }


def _finish(name: str, conditions: list[Condition], kind: str, witness: dict,
            params: Exponents | None = None, details: dict | None = None) -> CheckResult:
    required = [c for c in conditions if not c.advisory]
    failing = [c for c in required if not c.ok]
    head = min(failing or required, key=lambda c: (c.slack, c.label))
    flags = [f"{c.label}: lhs={c.lhs!r} rhs={c.rhs!r}" for c in conditions if not c.ok]
    return CheckResult(name, head.lhs, head.rhs, kind, witness,
                       params.to_dict() if params else None, None, flags, conditions,
                       dict(details or {}))


# ---------------------------------------------------------------------------
# covering lemma


def merge_intervals(pieces: Sequence[Interval]) -> list[Interval]:
    out: list[Interval] = []
    for I in sorted(pieces, key=lambda I: (I.a, I.b)):
        if out and I.a <= out[-1].b:
            if I.b > out[-1].b:
                out[-1] = Interval(out[-1].a, I.b)
        else:
            out.append(I)
    return out


def check_covering(w: StepFunction, mu: float, pieces: Sequence[Interval], C: float) -> CheckResult:
    """Union bound ``int_J w <= C (2|J|)^(1+mu)`` given the per-piece bound on every piece."""
    if not pieces:
        raise ValueError("need at least one piece")
    for i, I in enumerate(pieces):
        have = integrate(w, I)
        if not _le(have, C * I.length ** (1.0 + mu)):
            raise ValueError(f"piece {i} [{I.a}, {I.b}] violates the hypothesis: "
                             f"{have!r} > C |I|^(1+mu) = {C * I.length ** (1.0 + mu)!r}")
    union = merge_intervals(pieces)
    total = math.fsum(integrate(w, J) for J in union)
    size = math.fsum(J.length for J in union)
    cond = Condition("union bound", total, C * (2.0 * size) ** (1.0 + mu))
    return _finish("fml1", [cond], "exact",
                   {"pieces": [I.to_dict() for I in pieces], "C": C, "mu": mu},
                   details={"components": len(union), "measure": size})


# ---------------------------------------------------------------------------
# fmt1: the two left-part classes


def check_fmt1_forward(pair: WeightPair, e: Exponents, family: Sequence[Interval]) -> CheckResult:
    """``Wpq ratio <= 2^(1+(1+mu)q) * sup WpqEta(1/2) ratio`` on every family interval."""
    factor = 2.0 ** (1.0 + (1.0 + e.mu) * e.q)
    c_eta = class_constant(Kind.WPQ_ETA, pair, e, family, eta=0.5)
    worst = 0.0
    resid = 0.0
    for I in family:
        r = wpq_ratio(pair, e, I).ratio
        r_eta = wpq_eta_ratio(pair, e, I, 0.5).ratio
        worst = max(worst, r)
        resid = max(resid, abs(r_eta * factor - r) / r if r > 0 else abs(r_eta))
    conds = [Condition("Wpq <= factor * WpqEta(1/2)", worst, factor * c_eta.ratio),
             Condition("eta=1/2 factor identity", resid, 1e-12)]
    return _finish("fmt1.forward", conds, "exact", {"family_size": len(family)}, e,
                   {"factor": factor, "wpq_eta_half_constant": c_eta.ratio,
                    "identity_residual": resid})


def n0_for(eta: float) -> int:
    """Smallest ``N >= 1`` with ``eta <= 1 - 2**-N``."""
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    n = 1
    while eta > 1.0 - 2.0 ** -n:
        n += 1
    return n


def check_fmt1_caseI(pair: WeightPair, e: Exponents, I: Interval, eta: float,
                     wpq_constant: float | None = None) -> CheckResult:
    """Short left part (``eta <= 1/2``): it sits inside the left half of ``I``."""
    if not 0 < eta <= 0.5:
        raise ValueError(f"Case I needs 0 < eta <= 1/2, got {eta}")
    C = wpq_ratio(pair, e, I).ratio if wpq_constant is None else wpq_constant
    sub = left_part(I, eta)
    half = left_part(I, 0.5)
    struct = structural_rhs(pair, e, I)
    avg_sub = integrate(pair.U, sub) / sub.length
    avg_half_over_sub = integrate(pair.U, half) / sub.length
    wpq_bound = C * half.length * struct / sub.length
    final = C * eta_factor(e, eta) * struct
    conds = [Condition("I- inside left half", avg_sub, avg_half_over_sub),
             Condition("Wpq on I", avg_half_over_sub, wpq_bound),
             Condition("|J|/|I-| <= eta factor", wpq_bound, final),
             Condition("Case I bound", avg_sub, final)]
    return _finish("fmt1.caseI", conds, "envelope",
                   {"interval": I.to_dict(), "eta": eta}, e, {"wpq_constant": C})


def check_fmt1_caseII(pair: WeightPair, e: Exponents, I: Interval, eta: float,
                      wpq_constant: float | None = None) -> CheckResult:
    """Long left part (``eta > 1/2``): cover it by the first ``N0`` minus pieces.

    The per-piece bound applies the Wpq condition on ``[x_{k-1}, b]``, whose left
    half is ``J_k^-``.  Both the geometric-sum form and the displayed
    ``N0 / 2`` form of the final bound are evaluated; the latter is the one
    that decides the check.
    """
    if not 0.5 < eta < 1:
        raise ValueError(f"Case II needs 1/2 < eta < 1, got {eta}")
    n0 = n0_for(eta)
    dec = plus_minus(I, n0)
    sub = left_part(I, eta)
    r = (1.0 + e.mu) * e.q
    tails = [dec.tail(k - 1) for k in range(1, n0 + 1)]
    if wpq_constant is None:
        C = max(wpq_ratio(pair, e, T).ratio for T in tails)
    else:
        C = wpq_constant
    struct = structural_rhs(pair, e, I)
    conds = [Condition("covering by J_1^-..J_N0^-", sub.length, dec.points[n0] - I.a)]
    pieces = []
    for k, (J, T) in enumerate(zip(dec.minus, tails), start=1):
        u = integrate(pair.U, J)
        bound = C * J.length * (I.length / T.length) ** (1.0 + r) * struct
        conds.append(Condition(f"Wpq on [x_{k - 1}, b]", u, bound))
        pieces.append(u)
    lhs = integrate(pair.U, sub) / sub.length
    summed = math.fsum(pieces) / sub.length
    geometric = C * math.fsum(2.0 ** ((k - 1) * r) for k in range(1, n0 + 1)) * struct
    displayed = C * n0 / 2.0 * eta_factor(e, eta) * struct
    conds += [Condition("I- covered by minus pieces", lhs, summed),
              Condition("geometric sum form", summed, geometric),
              Condition("displayed N0/2 form", lhs, displayed)]
    return _finish("fmt1.caseII", conds, "envelope",
                   {"interval": I.to_dict(), "eta": eta}, e,
                   {"N0": n0, "wpq_constant": C,
                    "slack_geometric": _slack(lhs, geometric),
                    "slack_displayed": _slack(lhs, displayed)})


# ---------------------------------------------------------------------------
# fmt2: weak type


def weighted_cost(V: StepFunction, f: StepFunction, p: float) -> float:
    """``int V / f^p`` over the line, with ``V / inf = 0``."""
    def op(v, u):
        if u == INF:
            return 0.0
        if u == 0:
            return INF if v > 0 else 0.0
        return v / u ** p
    return integrate_line(combine(V, f, op))


def _require_inf_tails(f: StepFunction):
    if f.left_tail != INF or f.right_tail != INF:
        raise ValueError("f must have +inf tails")


def weak_type_ratio(pair: WeightPair, f: StepFunction, e: Exponents, lam: float,
                    window: Interval, refinement: int) -> RatioReport:
    """``U(outer sublevel set) / (lam^-q (int V/f^p)^(q/p))``."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    _require_inf_tails(f)
    S = sublevel_set(f, e.mu, lam, window, refinement)
    lhs = math.fsum(integrate(pair.U, J) for J in S.outer)
    lhs_inner = math.fsum(integrate(pair.U, J) for J in S.inner)
    cost = weighted_cost(pair.V, f, e.p)
    parts = [(lam, -e.q), (cost, e.q / e.p)]
    rhs = power_product(parts)
    ratio = 0.0 if lhs == 0 else power_product([(lhs, 1.0), (lam, e.q), (cost, -e.q / e.p)])
    rep = RatioReport(ratio, window, e, "weak", lhs=lhs, rhs=rhs)
    rep.extra.update(lam=lam, inner_measure=lhs_inner,
                     inner_ratio=0.0 if lhs_inner == 0 else lhs_inner / rhs)
    return rep


def check_fmt2_necessity(pair: WeightPair, e: Exponents, I: Interval, refinement: int = 4) -> CheckResult:
    """Substitute ``f = omega / chi_I`` and the matching level into the weak inequality."""
    w = omega(pair.V, e.p)
    f = restrict(w, I)
    left = left_part(I, 0.5)
    right_len = I.length - left.length
    wI = integrate(w, I)
    level_proof = wI / right_len ** (1.0 + e.mu)
    lam = (1.0 - STRICT_PERTURB) / level_proof
    cost = weighted_cost(pair.V, f, e.p)
    n = 2 * refinement * max(1, f.n_cells)
    xs = left.a + left.length * (np.arange(n + 1) / n)
    xs[-1] = left.b
    m_max = float(minimal_plus_grid(f, e.mu, xs).max())
    weak = weak_type_ratio(pair, f, e, lam, I, refinement)
    u_left = integrate(pair.U, left)
    factor = 2.0 ** (1.0 + (1.0 + e.mu) * e.q) * (1.0 - STRICT_PERTURB) ** -e.q
    conds = [Condition("cost identity |int V/f^p - omega(I)|", abs(cost - wI), 1e-12 * wI),
             Condition("m on I- below level", m_max, level_proof),
             Condition("U(I-) <= U(sublevel set)", u_left, weak.lhs),
             Condition("weak bound at lambda", u_left, weak.ratio * weak.rhs),
             Condition("implied Wpq ratio", wpq_ratio(pair, e, I).ratio, weak.ratio * factor)]
    return _finish("fmt2.necessity", conds, "exact", {"interval": I.to_dict()}, e,
                   {"lambda": lam, "weak_constant": weak.ratio, "refinement": refinement})


def check_fmt2_sufficiency(pair: WeightPair, e: Exponents, f: StepFunction, lambdas: Sequence[float],
                           window: Interval, refinement: int = 4,
                           family: Sequence[Interval] | None = None,
                           wpq_constant: float | None = None) -> CheckResult:
    """Weak bound with the proof's factor budget ``C 3^((1+mu)q) 8^((1+mu)q)``.

    The per-piece estimate ``int_{J_l} f <= 8^(1+mu) |J_l^+|^(1+mu) / lam`` on the
    plus-minus pieces of each sublevel component is advisory: it is flagged,
    with the constant it would actually need, instead of failing the check.
    """
    _require_inf_tails(f)
    if wpq_constant is None:
        if family is None:
            from .weights import interval_family
            family = interval_family(window, pair, refinement)
        wpq_constant = class_constant(Kind.WPQ, pair, e, family).ratio
    r = (1.0 + e.mu) * e.q
    K = wpq_constant * 3.0 ** r * 8.0 ** r
    cost = weighted_cost(pair.V, f, e.p)
    depth = math.ceil(math.log2(1.0 / DECOMP_RESOLUTION))
    conds = []
    needed = []
    for i, lam in enumerate(lambdas):
        S = sublevel_set(f, e.mu, lam, window, refinement)
        u = math.fsum(integrate(pair.U, J) for J in S.inner)
        conds.append(Condition(f"lambda[{i}] weak bound", u,
                               K * power_product([(lam, -e.q), (cost, e.q / e.p)])))
        worst, where = 0.0, None
        for c, comp in enumerate(S.inner):
            dec = plus_minus(comp, depth)
            for l, (J, Jp) in enumerate(zip(dec.full, dec.plus), start=1):
                val = integrate(f, J) / Jp.length ** (1.0 + e.mu)
                if val > worst:
                    worst, where = val, (c, l)
        bound = 8.0 ** (1.0 + e.mu) / lam
        if where is not None:
            conds.append(Condition(f"lambda[{i}] component {where[0]} piece J_{where[1]}: "
                                   f"8^(1+mu)/lambda", worst, bound, advisory=True))
        needed.append(worst * lam)
    if not conds:
        raise ValueError("no lambda values given")
    return _finish("fmt2.sufficiency", conds, "envelope",
                   {"lambdas": list(lambdas), "window": window.to_dict()}, e,
                   {"wpq_constant": wpq_constant, "K": K,
                    "piece_constant_needed": max(needed) if needed else 0.0,
                    "piece_constant_stated": 8.0 ** (1.0 + e.mu)})


# ---------------------------------------------------------------------------
# fmt3: strong type


def strong_type_ratio(pair: WeightPair, f: StepFunction, e: Exponents, window: Interval,
                      tol: float = DEFAULT_TOL) -> RatioReport:
    """``int_window U / m(f)^q`` over ``(int V/f^p)^(q/p)``."""
    _require_inf_tails(f)
    lhs = testing_integral(pair.U, f, e.mu, e.q, window, tol)
    cost = weighted_cost(pair.V, f, e.p)
    parts = [(cost, e.q / e.p)]
    ratio = 0.0 if lhs == 0 else power_product([(lhs, 1.0), (cost, -e.q / e.p)])
    return RatioReport(ratio, window, e, "strong", lhs=lhs, rhs=power_product(parts))


def check_fmt3(pair: WeightPair, e: Exponents, family: Sequence[Interval],
               trial_fs: Sequence[StepFunction], tol: float = DEFAULT_TOL,
               envelope: float | None = None) -> CheckResult:
    """Strong-type ratios against the family testing constant.

    For ``f = omega / chi_I`` the strong ratio is the testing ratio itself, so
    it never exceeds the family constant.  For the other trial functions the
    ratio over the constant is recorded; with ``envelope`` given it must stay
    below it.
    """
    w = omega(pair.V, e.p)
    sub_ratios, saw_ratios = [], []
    resid = 0.0
    for I in family:
        s = strong_type_ratio(pair, restrict(w, I), e, I, tol).ratio
        t = sawyer_ratio(pair, e, I, tol).ratio
        sub_ratios.append(s)
        saw_ratios.append(t)
        resid = max(resid, abs(s - t) / t if t > 0 else abs(s))
    c_star = max(saw_ratios)
    generic = [strong_type_ratio(pair, f, e, f.support_hull, tol).ratio for f in trial_fs]
    conds = [Condition("substitution f = omega/chi_I", max(sub_ratios), c_star),
             Condition("strong = testing ratio for f = omega/chi_I", resid, 1e-9)]
    if generic:
        top = max(generic)
        conds.append(Condition("generic ratios finite", 0.0 if math.isfinite(top) else 1.0, 0.0))
        if envelope is not None:
            conds.append(Condition("generic ratios within envelope", top, envelope * c_star))
    return _finish("fmt3", conds, "exact",
                   {"family_size": len(family), "trials": len(trial_fs)}, e,
                   {"sawyer_constant": c_star,
                    "generic_ratios": [_num(g) for g in generic],
                    "envelope_needed": (max(generic) / c_star) if generic and c_star > 0 else 0.0})


# ---------------------------------------------------------------------------
# fmt4, fmt5 and fmc1


def fmt4_parts(pair: WeightPair, e: Exponents, I: Interval, tol: float = DEFAULT_TOL):
    """``(LHS over I^-, omega(I^- u I^+), U(I^-))`` with ``2|I^-| = |I| = 4|I^+|``."""
    w = omega(pair.V, e.p)
    left = left_part(I, 0.5)
    both = left_part(I, 0.75)
    lhs = testing_integral(pair.U, restrict(w, I), e.mu, e.q, left, tol)
    return lhs, integrate(w, both), integrate(pair.U, left)


def check_fmt4(pair: WeightPair, e: Exponents, I: Interval, tol: float = DEFAULT_TOL,
               constant: float | None = None) -> CheckResult:
    lhs, w_both, u_left = fmt4_parts(pair, e, I, tol)
    base = w_both ** (e.q / e.p)
    eps = (base / u_left) ** (1.0 / e.q)
    ident = abs(u_left * eps ** e.q - base)
    ratio = lhs / base
    conds = [Condition("epsilon identity U(I-) eps^q = omega(I- u I+)^(q/p)", ident, 1e-12 * base),
             Condition("ratio finite", 0.0 if math.isfinite(ratio) else 1.0, 0.0)]
    if constant is not None:
        conds.append(Condition("local testing bound", lhs, constant * base))
    return _finish("fmt4", conds, "envelope" if constant is not None else "exact",
                   {"interval": I.to_dict()}, e,
                   {"lhs": lhs, "omega_base": w_both, "epsilon": eps, "ratio": ratio})


def check_fmt5(pair: WeightPair, e: Exponents, K0: Interval, shrink: float = 0.5, steps: int = 20,
               tol: float = DEFAULT_TOL, decay: float = 1e-3) -> CheckResult:
    """Left-anchored nested intervals ``|K_l| = shrink^l |K0|``; the testing integrals must vanish."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not 0 < shrink < 1:
        raise ValueError(f"shrink must lie in (0, 1), got {shrink}")
    w = omega(pair.V, e.p)
    T = []
    for l in range(steps + 1):
        K = Interval(K0.a, K0.a + shrink ** l * K0.length)
        T.append(testing_integral(pair.U, restrict(w, K), e.mu, e.q, K, tol))
    conds = [Condition(f"T_{l + 1} <= T_{l}", T[l + 1], T[l] * (1.0 + 10 * tol))
             for l in range(steps)]
    conds.append(Condition(f"T_{steps} <= {decay} T_0", T[-1], decay * T[0]))
    return _finish("fmt5", conds, "exact",
                   {"K0": K0.to_dict(), "shrink": shrink, "steps": steps}, e,
                   {"T": T})


def check_fmc1(pair: WeightPair, e: Exponents, I: Interval, tol: float = DEFAULT_TOL) -> CheckResult:
    """Telescope the testing integral over ``I`` into local pieces plus a vanishing tail."""
    depth = math.ceil(math.log2(1.0 / DECOMP_RESOLUTION))
    dec = plus_minus(I, depth)
    w = omega(pair.V, e.p)
    r = e.q / e.p
    # overlap: count the J_k covering each elementary cell [x_i, x_{i+1}]
    overlap = 0
    for lo, hi in zip(dec.points, dec.points[1:]):
        overlap = max(overlap, sum(1 for J in dec.full if J.a <= lo and hi <= J.b))
    w_I = integrate(w, I)
    pieces_w = [integrate(w, J) ** r for J in dec.full]
    telescoped = math.fsum(pieces_w)
    local = []
    for k in range(1, depth + 1):
        lhs_k = testing_integral(pair.U, restrict(w, dec.tail(k - 1)), e.mu, e.q,
                                 dec.minus[k - 1], tol)
        local.append(lhs_k)
    tail_I = dec.tail(depth)
    tail = testing_integral(pair.U, restrict(w, tail_I), e.mu, e.q, tail_I, tol)
    c_chain = max(l / p for l, p in zip(local, pieces_w))
    whole = sawyer_ratio(pair, e, I, tol)
    chain_total = math.fsum(local) + tail
    chain_bound = c_chain * 2.0 ** r + tail / w_I ** r
    conds = [Condition("each point in at most two J_k", float(overlap), 2.0),
             Condition("sum omega(J_k)^(q/p) <= 2^(q/p) omega(I)^(q/p)", telescoped,
                       2.0 ** r * w_I ** r),
             Condition("testing integral splits over minus pieces",
                       abs(chain_total - whole.lhs), 10 * tol * whole.lhs),
             Condition("testing ratio <= chain bound", whole.ratio, chain_bound)]
    return _finish("fmc1", conds, "exact", {"interval": I.to_dict()}, e,
                   {"chain_constant": c_chain, "tail": tail, "depth": depth,
                    "sawyer_ratio": whole.ratio, "max_overlap": overlap})


# ---------------------------------------------------------------------------
# suites


UNIT = Interval(0.0, 1.0)
THEOREMS = ("fml1", "fmt1", "fmt2", "fmt3", "fmt4", "fmt5", "fmc1")


def constants_pair(c: float = 1.0) -> WeightPair:
    return WeightPair(StepFunction.constant(c), StepFunction.constant(c))


def two_cell_pair() -> WeightPair:
    return WeightPair(StepFunction.constant(1.0), StepFunction((0.0, 1.0, 2.0), (1.0, 16.0), 1.0, 1.0))


def grid_family(window: Interval, gaps: int) -> list[Interval]:
    """All intervals with endpoints on an equispaced grid of ``gaps + 1`` points."""
    pts = [window.a + window.length * (i / gaps) for i in range(gaps)] + [window.b]
    return [Interval(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]


def random_pieces(rng: SplitMix64, window: Interval, count: int) -> list[Interval]:
    out = []
    for _ in range(count):
        a = rng.uniform(window.a, window.b)
        b = rng.uniform(window.a, window.b)
        if a == b:
            continue
        out.append(Interval(min(a, b), max(a, b)))
    return out or [window]


def _instances(seed: int, trials: int):
    """``(index, rng)`` per trial; each instance draws from its own stream."""
    master = SplitMix64(seed)
    for i in range(trials):
        yield i, master.spawn()


def _tag(res: CheckResult, seed: int | None, instance: str) -> CheckResult:
    res.seed = seed
    res.witness = {"instance": instance, **res.witness}
    return res


def suite_fml1(seed: int, trials: int) -> list[CheckResult]:
    w1 = StepFunction.constant(1.0)
    out = [
        _tag(check_covering(w1, 0.0, [Interval(0, 1), Interval(1, 2)], 1.0), None, "fixture:adjacent"),
        _tag(check_covering(w1, 1.0, [Interval(0, 1.5), Interval(0.5, 2)], 1.0), None, "fixture:overlap"),
        _tag(check_covering(w1, 0.5, [Interval(0, 1)], 1.0), None, "fixture:single"),
    ]
    for i, rng in _instances(seed, trials):
        w = random_step(rng, UNIT)
        mu = rng.choice((0.0, 0.5, 1.0, 2.0))
        pieces = random_pieces(rng, Interval(-0.25, 1.25), rng.integer(1, 8))
        C = max(integrate(w, I) / I.length ** (1.0 + mu) for I in pieces)
        out.append(_tag(check_covering(w, mu, pieces, C), seed, f"random:{i}"))
    return out


ETAS = (0.26, 0.74, 0.9, 0.99)


def _fmt1_instance(pair, e, I, eta, seed, name) -> CheckResult:
    if eta <= 0.5:
        return _tag(check_fmt1_caseI(pair, e, I, eta), seed, name)
    return _tag(check_fmt1_caseII(pair, e, I, eta), seed, name)


def suite_fmt1(seed: int, trials: int) -> list[CheckResult]:
    c = constants_pair()
    e0 = Exponents(0.0, 1.0, 1.0)
    out = [_tag(check_fmt1_forward(c, e0, grid_family(UNIT, 4)), None, "fixture:constants"),
           _tag(check_fmt1_forward(two_cell_pair(), e0, grid_family(Interval(0, 2), 4)), None,
                "fixture:two-cell")]
    for eta in (0.25, 0.5, *ETAS):
        out.append(_fmt1_instance(c, e0, UNIT, eta, None, f"fixture:constants:eta={eta}"))
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        a = rng.uniform(0.0, 0.5)
        I = Interval(a, a + rng.uniform(0.1, 0.5))
        eta = ETAS[i % len(ETAS)] if i < 2 * len(ETAS) else rng.uniform(0.01, 0.99)
        out.append(_tag(check_fmt1_forward(pair, e, grid_family(UNIT, 4)), seed, f"random:{i}"))
        out.append(_fmt1_instance(pair, e, I, eta, seed, f"random:{i}"))
    return out


def log_lambdas(f: StepFunction, mu: float, count: int = 5) -> list[float]:
    """``count`` levels log-spaced between the extreme minimal-function values on ``f``'s hull."""
    hull = f.support_hull
    xs = hull.a + hull.length * (np.arange(64) / 64)
    m = minimal_plus_grid(f, mu, xs)
    m = m[np.isfinite(m) & (m > 0)]
    lo, hi = float(m.min()), float(m.max())
    if hi <= lo:
        hi = 2.0 * lo
    levels = np.geomspace(lo * 0.9, hi * 1.1, count)
    return [float(1.0 / v) for v in levels]


def suite_fmt2(seed: int, trials: int) -> list[CheckResult]:
    c = constants_pair()
    e0 = Exponents(0.0, 1.0, 1.0)
    out = [_tag(check_fmt2_necessity(c, e0, Interval(0, 2)), None, "fixture:constants")]
    f = restrict(omega(c.V, 1.0), UNIT)
    out.append(_tag(check_fmt2_sufficiency(c, e0, f, [1 / 1.01, 1 / 2.0], UNIT,
                                           family=grid_family(UNIT, 4)),
                    None, "fixture:constants"))
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        fam = grid_family(UNIT, 4)
        for j, I in enumerate(fam):
            out.append(_tag(check_fmt2_necessity(pair, e, I), seed, f"random:{i}:I{j}"))
        f = random_function(rng, UNIT)
        out.append(_tag(check_fmt2_sufficiency(pair, e, f, log_lambdas(f, e.mu), UNIT, family=fam),
                        seed, f"random:{i}"))
    return out


def suite_fmt3(seed: int, trials: int) -> list[CheckResult]:
    c = constants_pair()
    e0 = Exponents(0.0, 1.0, 1.0)
    two = StepFunction.on_interval([0.0, 0.5, 1.0], [1.0, 3.0])
    out = [_tag(check_fmt3(c, Exponents(1.0, 1.0, 1.0), grid_family(UNIT, 2), [two]), None,
                "fixture:constants"),
           _tag(check_fmt3(c, e0, grid_family(UNIT, 2), [two]), None, "fixture:constants:mu0")]
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        fs = [random_function(rng, UNIT) for _ in range(5)]
        out.append(_tag(check_fmt3(pair, e, grid_family(UNIT, 2), fs), seed, f"random:{i}"))
    return out


def suite_fmt4(seed: int, trials: int) -> list[CheckResult]:
    out = [_tag(check_fmt4(constants_pair(), Exponents(1.0, 1.0, 1.0), Interval(0, 2)), None,
                "fixture:constants")]
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        out.append(_tag(check_fmt4(pair, e, UNIT), seed, f"random:{i}"))
    return out


def suite_fmt5(seed: int, trials: int) -> list[CheckResult]:
    c = constants_pair()
    out = [_tag(check_fmt5(c, Exponents(1.0, 1.0, 1.0), UNIT, 0.5, 12), None, "fixture:constants:mu1"),
           _tag(check_fmt5(c, Exponents(0.0, 1.0, 1.0), UNIT, 0.5, 12), None, "fixture:constants:mu0")]
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        out.append(_tag(check_fmt5(pair, e, UNIT, 0.5, 20), seed, f"random:{i}"))
    return out


def suite_fmc1(seed: int, trials: int) -> list[CheckResult]:
    out = [_tag(check_fmc1(constants_pair(), Exponents(0.0, 1.0, 1.0), UNIT), None,
                "fixture:constants")]
    for i, rng in _instances(seed, trials):
        pair = random_pair(rng)
        e = random_exponents(rng)
        out.append(_tag(check_fmc1(pair, e, UNIT), seed, f"random:{i}"))
    return out


SUITES: dict[str, Callable[[int, int], list[CheckResult]]] = {
    "fml1": suite_fml1, "fmt1": suite_fmt1, "fmt2": suite_fmt2, "fmt3": suite_fmt3,
    "fmt4": suite_fmt4, "fmt5": suite_fmt5, "fmc1": suite_fmc1,
}


def run_suite(name: str, trials: int, seed: int) -> list[CheckResult]:
    """Run one suite (or ``"all"``) over fixtures plus ``trials`` seeded instances."""
    if name == "all":
        return [r for key in THEOREMS for r in SUITES[key](seed, trials)]
    if name not in SUITES:
        raise KeyError(f"unknown theorem {name!r}; choose from {', '.join(THEOREMS)} or all")
    return SUITES[name](seed, trials)


CSV_FIELDS = ("name", "instance", "kind", "passed", "flagged", "lhs", "rhs", "slack", "seed")


def results_csv(results: Sequence[CheckResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in results:
        writer.writerow([r.name, r.witness.get("instance", ""), r.kind, int(r.passed),
                         int(r.flagged), format(r.lhs, ".17g"), format(r.rhs, ".17g"),
                         format(r.slack, ".17g"), "" if r.seed is None else r.seed])
    return buf.getvalue()
