"""Continue Phi around each branch point and compare with the exact integer matrices."""
import argparse
from dataclasses import dataclass

from hurwitz_fuchs.covering import new_hyperelliptic, new_rational
from hurwitz_fuchs.fuchsian import PhiEngine, compare_monodromy, system_for

SYSTEMS = {
    "g0d2": lambda: new_hyperelliptic([-1, 1]),
    "g1d2": lambda: new_hyperelliptic([0, 1, 2, 3.7]),
    "cubic": lambda: new_rational([1, 0, -3, 0], [1]),
    "rational": lambda: new_rational([1, 0, -2, -1], [1, 0, -3]),
}


@dataclass
class Config:
    system: str = "g1d2"
    flavor: str = "standard"
    tol: float = 1e-10


def main(cfg: Config):
    cov = SYSTEMS[cfg.system]()
    eng = PhiEngine(cov, tol=cfg.tol)
    out = compare_monodromy(system_for(cov, eng.data), eng, cfg.flavor)
    for k, v in out.items():
        print(f"{str(k):>4}  residual {v['residual']:.2e}  match {v['match']}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("system", nargs="?", default=Config.system, choices=sorted(SYSTEMS))
    ap.add_argument("--flavor", default=Config.flavor)
    ap.add_argument("--tol", type=float, default=Config.tol)
    a = ap.parse_args()
    main(Config(a.system, a.flavor, a.tol))
