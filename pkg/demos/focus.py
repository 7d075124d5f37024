"""Looking at one unit's transactions inside a composed network.

Hiding channel b between g and h erases the transfer from the combined
result.  Marking g's entries on b with signed copies first keeps them
visible: +b for what g sends, -b for what h receives.

    python3 demos/focus.py
"""

from pathlib import Path

from tuplix.basic import normalize
from tuplix.flux import sign_annotate
from tuplix.ftn import classify, compose_encapsulate, focus
from tuplix.syntax import parse_workspace

ws = parse_workspace((Path(__file__).parent / "data" / "two_units.tpx").read_text())
net = ws.networks["N"]
specs = list(ws.specs.values())

for a in sorted(net.attrs):
    print(f"channel {a}: {classify(net, a)}")

print("\ncomposed, b hidden:  ", compose_encapsulate(net, specs))
g = ws.specs["g"].body
print("g with signed copy:  ", normalize(sign_annotate(g, ["b"], net.ins["g"], net.outs["g"])))
print("focus on g:          ", focus(net, specs, "g"))
print("focus on h:          ", focus(net, specs, "h"))
