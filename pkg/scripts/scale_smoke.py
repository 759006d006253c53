"""Time every polynomial solver on a ring constellation of about 2,000 TVG nodes.

Also checks that the exact solvers refuse the instance instead of running.

    python3 scripts/scale_smoke.py [--planes 10 --per-plane 10 --snapshots 20 --clients 20]
"""

from __future__ import annotations

import argparse
import time

from tvgroute import BudgetExceeded
from tvgroute.download import polynomial_solver as download_solver, solve_exact_download
from tvgroute.generators import ring_instance
from tvgroute.upload import polynomial_solver as upload_solver, solve_exact_upload
from tvgroute.validate import validate_download, validate_upload

POLYNOMIAL = [
    ("1-UF-WS", False), ("1-UF-MM", False), ("1-SF-MM", False), ("2-SF-MM", False), ("2-SF-MM", True),
    ("mul-1-MM", False), ("mul-1-WS", False),
    ("1-UF-NCS", False), ("1-UF-CS", False), ("1-SF-NCS", False), ("2-SF-NCS", False), ("2-SF-NCS", True),
]
EXACT = ["2-UF-MM", "1-SF-WS", "2-UF-NCS", "1-SF-CS"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--planes", type=int, default=10)
    ap.add_argument("--per-plane", type=int, default=10)
    ap.add_argument("--snapshots", type=int, default=20)
    ap.add_argument("--clients", type=int, default=20)
    args = ap.parse_args()
    shape = (args.planes, args.per_plane, args.snapshots, args.clients)
    for name, separate in POLYNOMIAL:
        inst = ring_instance(name, *shape, separate=separate)
        phase_solver = download_solver if inst.phase == "download" else upload_solver
        t0 = time.perf_counter()
        sol = phase_solver(inst)(inst)
        dt = time.perf_counter() - t0
        check = validate_download if inst.phase == "download" else validate_upload
        problems = check(inst, sol)
        value = getattr(sol, "objective", None) if inst.phase == "download" else sol.utility
        print(f"{name:9s} {inst.servers:8s} nodes={len(inst.tvg.nodes)} status={sol.status} "
              f"value={value} valid={not problems} {dt:.2f}s")
    for name in EXACT:
        inst = ring_instance(name, *shape)
        exact = solve_exact_download if inst.phase == "download" else solve_exact_upload
        t0 = time.perf_counter()
        try:
            exact(inst)
            outcome = "solved"
        except BudgetExceeded as exc:
            outcome = f"refused ({exc})"
        print(f"{name:9s} exact {outcome} {time.perf_counter() - t0:.3f}s")


if __name__ == "__main__":
    main()
