#!/usr/bin/env python3
"""Solve LP-format files with HiGHS and print one line per file:
<path> <status> <objective>."""
import sys

import highspy


def solve(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 1e-9)
    h.setOptionValue("mip_abs_gap", 1e-9)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        return "read_error", float("nan")
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    return status.replace(" ", "_"), h.getInfo().objective_function_value


def main(argv):
    if len(argv) < 2:
        print("usage: highs_solve.py model.lp [...]", file=sys.stderr)
        return 2
    for path in argv[1:]:
        status, obj = solve(path)
        print(f"{path} {status} {obj:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
