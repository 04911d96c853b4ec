#!/usr/bin/env python3
"""Solve an MPS file with an external solver and print `<status> <objective>`.

Uses highspy when importable, otherwise scipy's HiGHS wrapper on a minimal
fixed-format MPS reader (enough for files written by `suffopt export-lp`).
Exit code 0 on optimal, 2 on infeasible/unbounded, 1 on error.
"""

import argparse
import math
import sys


def solve_highspy(path):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        raise RuntimeError(f"highspy could not read {path}")
    h.run()
    status = h.getModelStatus()
    if status == highspy.HighsModelStatus.kOptimal:
        return "optimal", h.getInfo().objective_function_value
    if status == highspy.HighsModelStatus.kInfeasible:
        return "infeasible", math.nan
    return h.modelStatusToString(status).lower(), math.nan


def read_mps(path):
    rows, obj_row = {}, None
    cols, cost = {}, {}
    entries = []
    rhs = {}
    bounds = {}
    section = None
    with open(path) as f:
        for line in f:
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok
                if sense == "N":
                    if obj_row is None:
                        obj_row = name
                    continue
                rows[name] = (len(rows), sense)
            elif section == "COLUMNS":
                col = tok[0]
                if col not in cols:
                    cols[col] = len(cols)
                for i in range(1, len(tok), 2):
                    r, v = tok[i], float(tok[i + 1])
                    if r == obj_row:
                        cost[cols[col]] = v
                    elif r in rows:
                        entries.append((rows[r][0], cols[col], v))
            elif section == "RHS":
                for i in range(1, len(tok), 2):
                    if tok[i] in rows:
                        rhs[rows[tok[i]][0]] = float(tok[i + 1])
            elif section == "BOUNDS":
                kind, col = tok[0], tok[2]
                j = cols[col]
                lo, hi = bounds.get(j, (0.0, math.inf))
                val = float(tok[3]) if len(tok) > 3 else None
                if kind == "UP":
                    hi = val
                    if val < 0 and lo == 0.0:
                        lo = -math.inf
                elif kind == "LO":
                    lo = val
                elif kind == "FX":
                    lo = hi = val
                elif kind == "FR":
                    lo, hi = -math.inf, math.inf
                elif kind == "MI":
                    lo = -math.inf
                elif kind == "PL":
                    hi = math.inf
                else:
                    raise RuntimeError(f"unsupported bound type {kind}")
                bounds[j] = (lo, hi)
            elif section == "RANGES":
                raise RuntimeError("RANGES not supported")
    return rows, cols, cost, entries, rhs, bounds


def solve_scipy(path):
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    rows, cols, cost, entries, rhs, bounds = read_mps(path)
    n, m = len(cols), len(rows)
    c = np.zeros(n)
    for j, v in cost.items():
        c[j] = v
    a = coo_matrix(([e[2] for e in entries], ([e[0] for e in entries], [e[1] for e in entries])),
                   shape=(m, n)).tocsr()
    b = np.array([rhs.get(i, 0.0) for i in range(m)])
    senses = [None] * m
    for _, (i, s) in rows.items():
        senses[i] = s
    eq = [i for i in range(m) if senses[i] == "E"]
    le = [i for i in range(m) if senses[i] == "L"]
    ge = [i for i in range(m) if senses[i] == "G"]
    a_ub = None
    b_ub = None
    if le or ge:
        from scipy.sparse import vstack
        a_ub = vstack([a[le], -a[ge]]).tocsr()
        b_ub = np.concatenate([b[le], -b[ge]])
    bnds = [tuple(None if math.isinf(x) else x for x in bounds.get(j, (0.0, math.inf)))
            for j in range(n)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a[eq] if eq else None,
                  b_eq=b[eq] if eq else None, bounds=bnds, method="highs")
    if res.status == 0:
        return "optimal", float(res.fun)
    return {2: "infeasible", 3: "unbounded"}.get(res.status, "error"), math.nan


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("mps")
    p.add_argument("--backend", choices=["auto", "highspy", "scipy"], default="auto")
    args = p.parse_args()
    backend = args.backend
    if backend == "auto":
        try:
            import highspy  # noqa: F401
            backend = "highspy"
        except ImportError:
            backend = "scipy"
    try:
        status, obj = solve_highspy(args.mps) if backend == "highspy" else solve_scipy(args.mps)
    except Exception as e:  # report and fail
        print(f"error {e}", file=sys.stderr)
        return 1
    print(f"{status} {obj!r}")
    return 0 if status == "optimal" else 2


if __name__ == "__main__":
    sys.exit(main())
