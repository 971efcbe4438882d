"""Calibrate the separation constant c_hat used at F = d^2.

Runs the noiseless recovery phase sweep at d in {32, 64, 128}, finds the
largest s with >= 99% exact recovery at each d (s_star), and reports

    c_hat = min over d with s_star >= 1 of s_star(d) * ln(d) / d

which is the largest c for which round(c d / ln d) <= s_star(d) there.

    python scripts/calibrate.py --trials 2000
"""
import argparse
import math

from sclab.experiments import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20261018)
    ap.add_argument("--d", type=int, nargs="+", default=[32, 64, 128])
    ap.add_argument("--s", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    cfg = ExperimentConfig("RecoveryPhase", d=args.d, F="d^2", s=args.s,
                           trials=args.trials, seed=args.seed)
    res = run_experiment(cfg)
    for r in res.select("success_rate"):
        print(f"d={r.d:4d} F={r.F:6d} s={r.s}  success={r.value:.4f} +- {r.stderr:.4f}")
    candidates = []
    for r in res.select("s_star"):
        print(f"d={r.d:4d}  s_star={int(r.value)}")
        if r.value >= 1:
            candidates.append(r.value * math.log(r.d) / r.d)
    if candidates:
        print(f"c_hat = {min(candidates):.4f}")
    else:
        print("no d reaches 99% success at any s >= 1; c_hat undefined")


if __name__ == "__main__":
    main()
