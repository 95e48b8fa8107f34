"""Fit the determinant constant |C| for several systems and report its stability."""
import argparse
import math
from dataclasses import dataclass, field

from hurwitz_fuchs import relhom
from hurwitz_fuchs.covering import new_hyperelliptic, new_rational
from hurwitz_fuchs.fuchsian import PhiEngine, det_check, det_stability, system_for


@dataclass
class Config:
    tol: float = 1e-10
    perturb: float = 1e-3
    points: int = 10
    systems: dict = field(default_factory=lambda: {
        "g0 d2": lambda: new_hyperelliptic([-1, 1], [-1, -1]),
        "g1 d2": lambda: new_hyperelliptic([0, 1, 2, 3.7]),
        "g2 d2": lambda: new_hyperelliptic([0, 1, 2, 3, 4, 5.3]),
        "cubic": lambda: new_rational([1, 0, -3, 0], [1]),
    })


def grid(n):
    return [-1.5 + 0.8j + 0.33 * k * (1 - 0.5j) for k in range(n)]


def main(cfg: Config):
    pts = grid(cfg.points)
    print(f"{'system':8} {'|C|':>14} {'|C|/pi':>10} {'cv':>9} {'shift':>9}")
    for name, make in cfg.systems.items():
        cov = make()
        eng = PhiEngine(cov, tol=cfg.tol)
        basis = relhom.build_basis(eng.shadow, "standard")
        rep = det_check(system_for(cov, eng.data), eng, basis, pts)
        shift = det_stability(cov, pts, cfg.perturb, "standard", cfg.tol)["max_rel_change"]
        print(f"{name:8} {rep.abs_mean:14.6f} {rep.abs_mean / math.pi:10.6f} {rep.cv:9.1e} {shift:9.1e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=Config.tol)
    ap.add_argument("--points", type=int, default=Config.points)
    a = ap.parse_args()
    main(Config(tol=a.tol, points=a.points))
