"""Solve an LP file with HiGHS and print the result as one JSON line.

usage: highs_solve.py MODEL.lp TIME_LIMIT_SECS
"""

import json
import sys

import highspy


def main():
    path, limit = sys.argv[1], float(sys.argv[2])
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.readModel(path)
    h.run()
    info = h.getInfo()
    lp = h.getLp()
    values = h.getSolution().col_value
    x = {name: values[i] for i, name in enumerate(lp.col_names_) if name.startswith("x_")}
    print(json.dumps({
        "status": h.modelStatusToString(h.getModelStatus()),
        "objective": info.objective_function_value,
        "bound": info.mip_dual_bound,
        "x": x,
    }))


if __name__ == "__main__":
    main()
