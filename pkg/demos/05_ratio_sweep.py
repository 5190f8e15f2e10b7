"""Ratio t^2 d / N^2 over the Paley family; it climbs toward 1/2."""

from asq.cli import sweep_rows

rows = sweep_rows(2, [5, 13, 17, 29, 37, 41, 53, 61], seed=42, certify=False, warn=print)
print(f"{'q':>4} {'t':>4} {'alpha_u >=':>11} {'ratio':>8}")
for r, _ in rows:
    print(f"{r['q']:>4} {r['t']:>4} {r['alpha_u_lower']:>11} {r['ratio']:>8.4f}")
