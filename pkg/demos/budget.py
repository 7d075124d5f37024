"""Composing a production budget from four unit specifications.

A source S pays a reward into the control unit Q, which keeps a share k
and splits the rest between two production units.  Hiding the internal
channels leaves the budget as seen from outside.

    python3 demos/budget.py
"""

from pathlib import Path

from tuplix.basic import normalize
from tuplix.equality import tuplix_eq
from tuplix.ftn import check_unit_spec, compose_encapsulate, validate_ftn
from tuplix.meadow import eval_data
from tuplix.syntax import format_tuplix, parse_workspace

ws = parse_workspace((Path(__file__).parent / "data" / "budget.tpx").read_text())
net = ws.networks["budget"]

print("network problems:", validate_ftn(net) or "none")
for unit, spec in ws.specs.items():
    print(f"  {unit:3} {format_tuplix(spec.body)}")
    assert not check_unit_spec(net, spec)

budget = compose_encapsulate(net, ws.specs.values())
print("\ncombined budget, internal channels hidden:")
print("  ", budget)
print("matches the expected form:", tuplix_eq(budget, ws.terms["B_expected"]))

# proportional split: each unit's share depends on its own output
prop = normalize(ws.terms["Bprop"])
print("\nproportional variant:")
for a in prop.alternatives:
    print("  ", a)
print("against c(k*rew*(n1+n2)) & (1-k)*(d1(rew*n1) & d2(rew*n2)):",
      tuplix_eq(prop, ws.terms["Bprop_expected"]))

# the two sides differ only where n1 + n2 = 0, where 1/(n1+n2) is 0
(alt,) = prop.alternatives
env = {"rew": 3, "k": 0, "n1": 2, "n2": -2}
payouts = ", ".join(f"{k} = {eval_data(v, env)}" for k, v in alt.entries)
print(f"at n1 = 2, n2 = -2 the engine pays {payouts},"
      " while the expected form pays d1 = 6, d2 = -6")
