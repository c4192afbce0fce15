#!/usr/bin/env python3
"""Solve a DIMACS CNF with CaDiCaL from python-sat; prints SAT-competition output.

Exit code 10 for SAT, 20 for UNSAT.
"""
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: pysat_solve.py FILE.cnf", file=sys.stderr)
        return 1
    cnf = CNF(from_file=sys.argv[1])
    with Solver(name="cadical153", bootstrap_with=cnf.clauses) as s:
        if not s.solve():
            print("s UNSATISFIABLE")
            return 20
        model = s.get_model() or []
        assigned = {abs(l): l for l in model}
        values = [assigned.get(v, -v) for v in range(1, cnf.nv + 1)]
        print("s SATISFIABLE")
        for i in range(0, len(values), 20):
            print("v " + " ".join(str(x) for x in values[i:i + 20]))
        print("v 0")
        return 10


if __name__ == "__main__":
    sys.exit(main())
