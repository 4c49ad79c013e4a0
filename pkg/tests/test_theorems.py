import json

import pytest

from lienard_lab import builtin, check_hypotheses, find_limit_cycles, predict_count


def _verdicts(report):
    return {h.id: h.verdict for h in report.hypotheses}


def test_vdp_classical_all_pass(vdp1):
    r = check_hypotheses(vdp1, "classical")
    assert _verdicts(r) == {"i": "pass", "ii": "pass", "iii": "pass", "iv": "pass"}
    assert r.predicted_N == 1


def test_quintic_k3_two_cycle_all_pass(quintic3):
    r = check_hypotheses(quintic3, "two_cycle")
    assert r.predicted_N == 2
    assert all(h.verdict == "pass" for h in r.hypotheses)


def test_quintic_fold_fails_condition_iv():
    s = builtin("quintic", {"k": 3.515625})
    r = check_hypotheses(s, "two_cycle")
    assert r.predicted_N is None
    assert r.verdict_of("iv") == "fail"
    assert r.verdict_of("iii") == "pass"


def test_quintic_k35_fails_condition_iv(quintic35):
    r = check_hypotheses(quintic35, "two_cycle")
    assert r.predicted_N is None
    assert r.verdict_of("iv") == "fail"


def test_non_necessity_witness(quintic35):
    # hypotheses fail yet two cycles exist: sufficient, not necessary
    n, report = predict_count(quintic35)
    assert n is None
    assert len(find_limit_cycles(quintic35)) == 2
    assert any("rejected" in note for note in report.notes)


def test_predict_three_cycle(three_cycle):
    n, report = predict_count(three_cycle)
    assert n == 3
    assert report.theorem == "n_cycle"


def test_predict_two_cycle_model_with_bound_below_L(two_cycle):
    n, report = predict_count(two_cycle)
    assert n == 2
    # the bound from the inner cycle sits below the maximum at 0.15
    r = check_hypotheses(two_cycle, "two_cycle")
    assert r.predicted_N == 2
    alpha, L = r.hypotheses[3].witness[0], r.hypotheses[3].witness[1]
    assert alpha == pytest.approx(0.1222144, abs=1e-5)
    assert L == pytest.approx(0.15, abs=1e-9)
    assert alpha < L


def test_predict_vdp_bounded_via_extension():
    n, report = predict_count(builtin("vdp_bounded", {"mu": 1.0}))
    assert n == 1
    assert report.theorem == "extension"
    r_classical = check_hypotheses(builtin("vdp_bounded", {"mu": 1.0}), "classical")
    assert r_classical.predicted_N is None
    assert r_classical.verdict_of("iv") == "fail"


def test_no_cycle_parameters_predict_none():
    s = builtin("quintic", {"k": 3.65})
    n, report = predict_count(s)
    assert n is None
    r = check_hypotheses(s, "two_cycle")
    assert r.predicted_N is None
    assert any("cycle" in note for note in r.notes)


def test_soundness_on_catalog():
    # whenever a theorem predicts N, detection finds exactly N
    cases = [("vdp", {"mu": 0.1}), ("vdp", {"mu": 1.0}), ("vdp", {"mu": 5.0}),
             ("quintic", {"k": 3.0}), ("two_cycle", None), ("three_cycle", None)]
    for name, params in cases:
        s = builtin(name, params)
        cycles = find_limit_cycles(s)
        n, _ = predict_count(s)
        if n is not None:
            assert n == len(cycles), s.name


def test_report_determinism(two_cycle):
    a = check_hypotheses(two_cycle, "two_cycle")
    b = check_hypotheses(two_cycle, "two_cycle")
    ja = json.dumps(a.as_dict(), sort_keys=True)
    jb = json.dumps(b.as_dict(), sort_keys=True)
    assert ja == jb


def test_unknown_theorem_rejected(vdp1):
    with pytest.raises(ValueError):
        check_hypotheses(vdp1, "uniqueness")
