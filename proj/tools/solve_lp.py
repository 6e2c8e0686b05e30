#!/usr/bin/env python3
"""Solve an exported model with HiGHS and write "name value" lines plus the objective."""

import argparse
import sys

import highspy


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model", help="CPLEX-LP file")
    ap.add_argument("-o", "--output", help="solution file (default: stdout)")
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--gap", type=float, default=1e-9, help="relative MIP gap")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", args.time_limit)
    h.setOptionValue("mip_rel_gap", args.gap)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.setOptionValue("threads", args.threads)
    if h.readModel(args.model) != highspy.HighsStatus.kOk:
        print(f"cannot read {args.model}", file=sys.stderr)
        return 2
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    info = h.getInfo()
    lp = h.getLp()
    values = h.getSolution().col_value

    out = open(args.output, "w") if args.output else sys.stdout
    with out:
        out.write(f"# status {status}\n")
        out.write(f"# objective {info.objective_function_value:.17g}\n")
        out.write(f"# bound {info.mip_dual_bound:.17g}\n")
        for name, v in zip(lp.col_names_, values):
            if abs(v) > 1e-9:
                out.write(f"{name} {v:.17g}\n")
    return 0 if status == "Optimal" else 1


if __name__ == "__main__":
    sys.exit(main())
