"""Mechanical hypothesis checking for the exact-count theorems.

Each system is run through the strongest applicable theorem.  Note the two
faces of sufficiency: quintic k=3 passes the two-cycle conditions and indeed
has two cycles, while k=3.5 fails condition (iv) (the amplitude bound climbs
above the local maximum of F) yet STILL has two cycles - the conditions are
sufficient, never necessary.  The bounded Van der Pol variant fails the
classical growth condition but is rescued by the extension theorem.
"""

from lienard_lab import builtin, check_hypotheses, find_limit_cycles, predict_count

SYSTEMS = [
    ("vdp", {"mu": 1.0}),
    ("vdp_bounded", {"mu": 1.0}),
    ("quintic", {"k": 3.0}),
    ("quintic", {"k": 3.5}),
    ("quintic", {"k": 3.65}),
    ("two_cycle", None),
    ("three_cycle", None),
]

for name, params in SYSTEMS:
    system = builtin(name, params)
    predicted, report = predict_count(system)
    detected = len(find_limit_cycles(system))
    print(f"== {system.name}: predicted "
          f"{predicted if predicted is not None else 'none'} "
          f"(via {report.theorem}), detected {detected}")
    for h in report.hypotheses:
        print(f"   ({h.id}) [{h.verdict:4s}] {h.statement}")
    for note in report.notes:
        print(f"   note: {note}")
    print()

# zoom into the failure that separates k=3.5 from k=3: condition (iv)
r = check_hypotheses(builtin("quintic", {"k": 3.5}), "two_cycle")
alpha, L = r.hypotheses[3].witness[0], r.hypotheses[3].witness[1]
print(f"quintic k=3.5 condition (iv) witness: bound={alpha:.5f} vs "
      f"local max L={L:.5f} -> {'ok' if alpha < L else 'violated'}")
