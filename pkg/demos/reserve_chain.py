"""A chain of reserves fed by business units, period by period.

Each period n has a reserve R_n and a business unit Q_n.  The Kirchhoff
operator K keeps every unit balanced; composing n+1 periods and hiding the
channels between them leaves one balanced unit whose payouts accumulate
the fixed payments pw and the retained income k*inc_i.

    python3 demos/reserve_chain.py [N]
"""

import sys

from tuplix.basic import normalize
from tuplix.equality import tuplix_eq
from tuplix.ftn import (
    business_unit, reserve_chain, reserve_chain_closed_form, reserve_unit,
)
from tuplix.syntax import format_tuplix

top = int(sys.argv[1]) if len(sys.argv) > 1 else 2

print("reserve R_0:   ", format_tuplix(reserve_unit(0)))
print("  balanced as: ", normalize(reserve_unit(0), eliminate=None))
print("business Q_0:  ", format_tuplix(business_unit(0)))
print("  closed form: ", normalize(business_unit(0)))

for n in range(top + 1):
    got = reserve_chain(n)
    closed = reserve_chain_closed_form(n)
    print(f"\nP_{n}: {len(got.alternatives)} alternative(s)")
    for a in got.alternatives:
        print("  ", a)
    print("   equal to the closed form:", tuplix_eq(got, closed))
