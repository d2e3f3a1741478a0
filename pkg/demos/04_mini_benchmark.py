"""A small end-to-end benchmark: three policies, two team sizes, two
synthetic fields, every start, written to CSV.

Run:

    python3 demos/04_mini_benchmark.py
"""

from pathlib import Path

from transectplan import ExperimentSpec, Hyperparams, run_benchmark, write_csv

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

spec = ExperimentSpec(
    n_rows=4,
    n_cols=8,
    omega1=5.0,
    omega2=5.0,
    h=Hyperparams(ell1=12.0, ell2=6.0, signal_var=1.0, noise_var=0.05),
    team_sizes=(1, 2),
    policies=("markov", "greedy-ent", "greedy-mi"),
    seeds=(0, 1),
    start_mode="all",
    mean=10.0,
)

rows = run_benchmark(spec)
csv_path = OUT / "mini_benchmark.csv"
write_csv(rows, csv_path)
print(f"{len(rows)} rows -> {csv_path}")

print("\nper-start mean rows (ent/err lower is better; entd/errd are the")
print("gaps relative to the dp planner, positive favors the other policy):")
for r in rows:
    if r["start"] != "mean":
        continue
    err = "     -" if r["err"] is None else f"{r['err']:.4f}"
    entd = "     -" if r["entd"] is None else f"{r['entd']:+.4f}"
    print(
        f"seed {r['seed']}  k={r['k']}  {r['policy']:<12} "
        f"ent {r['ent']:8.4f}  err {err}  entd {entd}"
    )
