"""Check the area aggregation, forwarding and prefix reduction laws on a small grid.

    SOLACE_DEPTH=40 python3 demos/toolbox_grid.py
"""

from solace.din.toolbox import check_aggregation, check_forwarding, check_prefix_reduction

for a in range(-1, 4):
    print("aggregate", " ".join(f"{a:>2}+{b:>2}:{'ok' if check_aggregation(a, b) else '--'}" for b in range(-1, 4)))
for n in range(4):
    print("prefix   ", " ".join(f"n={n} p={p}:{'ok' if check_prefix_reduction(n, p) else '--'}" for p in range(4)))
for p in (-2, -1, 0, 1):
    r = check_forwarding(p)
    print(f"forward   order {p:>2}: {'ok' if r.ok else '--'}")
