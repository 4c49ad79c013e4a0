"""Mechanical verification of the exact-count theorem hypotheses.

Four theorems are checked, each predicting an exact number of limit cycles
when every hypothesis passes:

* ``classical``  unique cycle; F has one positive zero and grows monotonically
                 to +inf beyond it.
* ``extension``  unique cycle; the growth condition is replaced by local
                 monotonicity up to the amplitude bound and nondecrease beyond
                 it, so bounded F qualifies.
* ``two_cycle``  exactly two cycles; F has two positive simple zeros, the
                 amplitude bound of the inner cycle stays below the first
                 local maximum between them, and F drops monotonically to
                 -inf beyond the second zero.
* ``n_cycle``    exactly N cycles for N positive simple zeros, with one
                 amplitude bound per interior interval staying below that
                 interval's extremum.

The checks are numeric: sampling on fixed grids (deterministic reports),
zero/extremum structure from the sign-scan machinery, and the amplitude
bounds from the detected cycles' y-intercepts.  Sufficiency, not necessity:
a failed report does not mean cycles are absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitude import solve_alpha
from .cycles import find_limit_cycles
from .errors import AnalysisError, NoRootError
from .functions import find_zero_structure, validate_model
from .integrate import StepControl

THEOREMS = ("classical", "extension", "two_cycle", "n_cycle")

# sampled monotonicity admits exactly-flat stretches (piecewise joints)
_MONO_TOL = -1e-12
_ODD_TOL = 1e-10
_SAMPLES = 1000


@dataclass(frozen=True)
class Hypothesis:
    id: str
    statement: str
    verdict: str                 # pass | fail | not_checked
    witness: tuple = ()

    def as_dict(self):
        return {"id": self.id, "statement": self.statement,
                "verdict": self.verdict, "witness": list(self.witness)}


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    hypotheses: tuple
    predicted_N: int | None
    notes: tuple = ()

    @property
    def all_pass(self):
        return all(h.verdict == "pass" for h in self.hypotheses)

    def verdict_of(self, hyp_id):
        for h in self.hypotheses:
            if h.id == hyp_id:
                return h.verdict
        raise KeyError(hyp_id)

    def as_dict(self):
        return {"theorem": self.theorem,
                "hypotheses": [h.as_dict() for h in self.hypotheses],
                "predicted_N": self.predicted_N,
                "notes": list(self.notes)}


def _horizon(system, zs):
    a_max = zs.zeros[-1] if zs.zeros else 1.0
    return min(system.d * (1 - 1e-9), 10.0 * max(a_max, 0.1))


def _check_continuity(system):
    vF = validate_model(system.F, c1_required=True)
    vg = validate_model(system.g, c1_required=False)
    ok = vF.passed and vg.passed
    witness = (vF.max_value_residual, vF.max_derivative_residual,
               vg.max_value_residual)
    return Hypothesis("i", "f and g are continuous (F is C1, g is C0)",
                      "pass" if ok else "fail", witness)


def _check_oddness_positivity(system, hi):
    xs = np.linspace(hi * 1e-6, hi, _SAMPLES)
    odd_f = np.max(np.abs(system.F.values(-xs) + system.F.values(xs)))
    odd_g = np.max(np.abs(system.g.values(-xs) + system.g.values(xs)))
    gmin = float(np.min(system.g.values(xs)))
    ok = odd_f <= _ODD_TOL and odd_g <= _ODD_TOL and gmin > 0.0
    return Hypothesis("ii", "F and g are odd and g(x) > 0 for x > 0",
                      "pass" if ok else "fail", (odd_f, odd_g, gmin))


def _monotone_margin(model, lo, hi, direction):
    """min over samples of direction * f(x) on (lo, hi]; >= _MONO_TOL passes."""
    if hi <= lo:
        return math.inf
    xs = np.linspace(lo, hi, _SAMPLES + 1)[1:]
    return float(np.min(direction * model.derivatives(xs)))


def _growth(model, lo, hi, direction):
    """direction * (F(hi) - F(mid)): positive when |F| keeps growing."""
    mid = 0.5 * (lo + hi)
    return direction * (model.value(hi) - model.value(mid))


def _fail_all(theorem, reason):
    hyps = tuple(Hypothesis(i, reason, "not_checked") for i in ("i", "ii", "iii", "iv"))
    return TheoremReport(theorem, hyps, None, (reason,))


def _first_extremum_in(zs, lo, hi):
    for e, v in zip(zs.extrema, zs.values_at_extrema):
        if lo < e < hi:
            return e, v
    return None, None


def _extrema_in(zs, lo, hi):
    return [e for e in zs.extrema if lo < e < hi]


def _alpha_from_cycle(system, cycles, index, bracket):
    """Amplitude bound for the index-th innermost cycle, or (None, note)."""
    if len(cycles) <= index:
        return None, (f"no detected cycle #{index + 1} to supply the "
                      f"y-intercept for the amplitude bound")
    try:
        a = solve_alpha(system, cycles[index].y_plus0, bracket)
    except NoRootError:
        return None, (f"amplitude-bound equation has no root in "
                      f"({bracket[0]:.6g}, {bracket[1]:.6g})")
    return a, None


def check_hypotheses(system, theorem, cycles=None, ctrl=None):
    """Verify one theorem's hypotheses; predicted_N is set iff all pass."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; pick from {THEOREMS}")
    ctrl = ctrl or StepControl()
    zs = find_zero_structure(system)
    hi = _horizon(system, zs)
    h1 = _check_continuity(system)
    h2 = _check_oddness_positivity(system, hi)
    notes = []

    needs_cycles = theorem in ("extension", "two_cycle", "n_cycle")
    if needs_cycles and cycles is None:
        try:
            cycles = find_limit_cycles(system, ctrl=ctrl)
        except AnalysisError as exc:
            return _fail_all(theorem, f"cycle detection failed: {exc}")
    cycles = cycles or []

    if theorem == "classical":
        h3, h4 = _classical_34(system, zs, hi, notes)
        predicted = 1
    elif theorem == "extension":
        h3, h4 = _extension_34(system, zs, hi, cycles, notes)
        predicted = 1
    elif theorem == "two_cycle":
        h3, h4 = _two_cycle_34(system, zs, hi, cycles, notes)
        predicted = 2
    else:
        h3, h4 = _n_cycle_34(system, zs, hi, cycles, notes)
        predicted = len(zs.zeros)

    hyps = (h1, h2, h3, h4)
    ok = all(h.verdict == "pass" for h in hyps)
    return TheoremReport(theorem, hyps, predicted if ok else None, tuple(notes))


def _classical_34(system, zs, hi, notes):
    n = len(zs.zeros)
    ok3 = n == 1 and not zs.non_simple
    h3 = Hypothesis("iii", "F has a single positive zero and it is simple",
                    "pass" if ok3 else "fail",
                    tuple(zs.zeros) + tuple(zs.non_simple))
    if not ok3:
        return h3, Hypothesis("iv", "F -> +inf monotonically beyond the zero",
                              "not_checked")
    a = zs.zeros[0]
    margin = _monotone_margin(system.F, a, hi, +1.0)
    growth = _growth(system.F, a, hi, +1.0)
    ok4 = margin >= _MONO_TOL and growth > 1e-9 * (1 + abs(system.F.value(hi)))
    if margin >= _MONO_TOL and not ok4:
        notes.append("F is monotone but its tail looks bounded; "
                     "the extension theorem may apply")
    h4 = Hypothesis("iv", "F -> +inf monotonically beyond the zero",
                    "pass" if ok4 else "fail", (margin, growth))
    return h3, h4


def _extension_34(system, zs, hi, cycles, notes):
    n = len(zs.zeros)
    ok3 = n == 1 and not zs.non_simple
    h3 = Hypothesis("iii", "F has a single positive zero and it is simple",
                    "pass" if ok3 else "fail",
                    tuple(zs.zeros) + tuple(zs.non_simple))
    if not ok3:
        return h3, Hypothesis(
            "iv", "F is monotone increasing up to the amplitude bound and "
                  "nondecreasing beyond it", "not_checked")
    a = zs.zeros[0]
    alpha, err = _alpha_from_cycle(system, cycles, 0, (a, hi))
    if alpha is None:
        notes.append(err)
        return h3, Hypothesis(
            "iv", "F is monotone increasing up to the amplitude bound and "
                  "nondecreasing beyond it", "fail")
    m_in = _monotone_margin(system.F, a, alpha, +1.0)
    m_out = _monotone_margin(system.F, alpha, hi, +1.0)
    ok4 = m_in >= _MONO_TOL and m_out >= _MONO_TOL
    h4 = Hypothesis("iv", "F is monotone increasing up to the amplitude bound "
                          "and nondecreasing beyond it",
                    "pass" if ok4 else "fail", (alpha, m_in, m_out))
    return h3, h4


def _two_cycle_34(system, zs, hi, cycles, notes):
    n = len(zs.zeros)
    stmt3 = "F has exactly two positive simple zeros with a2 above the bound"
    stmt4 = ("the amplitude bound stays below the first local maximum and F "
             "is monotone increasing up to it, then -> -inf beyond a2")
    if n != 2 or zs.non_simple:
        return (Hypothesis("iii", stmt3, "fail",
                           tuple(zs.zeros) + tuple(zs.non_simple)),
                Hypothesis("iv", stmt4, "not_checked"))
    a1, a2 = zs.zeros
    alpha, err = _alpha_from_cycle(system, cycles, 0, (a1, a2))
    if alpha is None:
        notes.append(err)
        return (Hypothesis("iii", stmt3, "fail", (a1, a2)),
                Hypothesis("iv", stmt4, "not_checked"))
    ok3 = a2 > alpha
    h3 = Hypothesis("iii", stmt3, "pass" if ok3 else "fail", (a1, a2, alpha))
    L, _ = _first_extremum_in(zs, a1, a2)
    if L is None:
        notes.append("no local extremum of F between the zeros")
        return h3, Hypothesis("iv", stmt4, "fail", (alpha,))
    m_in = _monotone_margin(system.F, a1, alpha, +1.0)
    m_tail = _monotone_margin(system.F, a2, hi, -1.0)
    decay = _growth(system.F, a2, hi, -1.0)
    ok4 = (alpha < L and m_in >= _MONO_TOL and m_tail >= _MONO_TOL
           and decay > 1e-9 * (1 + abs(system.F.value(hi))))
    h4 = Hypothesis("iv", stmt4, "pass" if ok4 else "fail",
                    (alpha, L, m_in, m_tail))
    if not ok4 and alpha >= L:
        notes.append(f"amplitude bound {alpha:.6g} is not below the local "
                     f"maximum {L:.6g}")
    return h3, h4


def _n_cycle_34(system, zs, hi, cycles, notes):
    stmt3 = ("F has N positive simple zeros and each interior interval "
             "carries an amplitude bound below its (unique) extremum")
    stmt4 = ("F is monotone between each zero and its amplitude bound and "
             "|F| -> inf monotonically beyond the last zero")
    n = len(zs.zeros)
    if n < 1 or zs.non_simple:
        return (Hypothesis("iii", stmt3, "fail",
                           tuple(zs.zeros) + tuple(zs.non_simple)),
                Hypothesis("iv", stmt4, "not_checked"))
    alphas = []
    ok3 = True
    for i in range(n - 1):
        a_lo, a_hi = zs.zeros[i], zs.zeros[i + 1]
        alpha, err = _alpha_from_cycle(system, cycles, i, (a_lo, a_hi))
        if alpha is None:
            notes.append(f"interval {i + 1}: {err}")
            ok3 = False
            break
        inner = _extrema_in(zs, a_lo, a_hi)
        if not inner:
            notes.append(f"interval {i + 1}: no extremum of F")
            ok3 = False
            break
        if i < n - 2 and len(inner) != 1:
            notes.append(f"interval {i + 1}: extremum not unique")
            ok3 = False
            break
        L = inner[0]
        alphas.append(alpha)
        if not alpha < L:
            notes.append(f"interval {i + 1}: amplitude bound {alpha:.6g} "
                         f"not below extremum {L:.6g}")
            ok3 = False
            break
    h3 = Hypothesis("iii", stmt3, "pass" if ok3 else "fail",
                    tuple(zs.zeros) + tuple(alphas))
    if not ok3:
        return h3, Hypothesis("iv", stmt4, "not_checked")
    margins = []
    ok4 = True
    for i, alpha in enumerate(alphas):
        a_lo, a_hi = zs.zeros[i], zs.zeros[i + 1]
        probe = system.F.value(0.5 * (a_lo + min(alpha, a_hi)))
        direction = 1.0 if probe >= 0.0 else -1.0
        m = _monotone_margin(system.F, a_lo, alpha, direction)
        margins.append(m)
        ok4 = ok4 and m >= _MONO_TOL
    a_n = zs.zeros[-1]
    probe_x = min(system.d * (1 - 1e-9), a_n * 1.5)
    tail_dir = 1.0 if system.F.value(probe_x) >= 0.0 else -1.0
    m_tail = _monotone_margin(system.F, a_n, hi, tail_dir)
    growth = _growth(system.F, a_n, hi, tail_dir)
    ok4 = (ok4 and m_tail >= _MONO_TOL
           and growth > 1e-9 * (1 + abs(system.F.value(hi))))
    h4 = Hypothesis("iv", stmt4, "pass" if ok4 else "fail",
                    tuple(margins) + (m_tail, growth))
    return h3, h4


def predict_count(system, ctrl=None):
    """Try the theorems strongest-first and return the first full pass.

    Returns (predicted_N, report).  The report's notes record which theorems
    were rejected and the failing hypotheses.  predicted_N is None when no
    theorem applies; that is not evidence of absence (the hypotheses are
    sufficient, not necessary).
    """
    ctrl = ctrl or StepControl()
    try:
        cycles = find_limit_cycles(system, ctrl=ctrl)
    except AnalysisError:
        cycles = []
    rejection_notes = []
    for theorem in ("n_cycle", "two_cycle", "extension", "classical"):
        report = check_hypotheses(system, theorem, cycles=cycles, ctrl=ctrl)
        if report.all_pass:
            notes = tuple(rejection_notes) + report.notes
            report = TheoremReport(report.theorem, report.hypotheses,
                                   report.predicted_N, notes)
            return report.predicted_N, report
        failing = ",".join(h.id for h in report.hypotheses
                           if h.verdict == "fail")
        rejection_notes.append(f"{theorem} rejected (failing: {failing or 'none'})")
    hyps = tuple()
    final = TheoremReport("none", hyps, None, tuple(rejection_notes))
    return None, final
