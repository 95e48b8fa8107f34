"""Print the four degeneration ratios as two branch points collide."""
import argparse
from dataclasses import dataclass

from hurwitz_fuchs.periods import degeneration_check


@dataclass
class Config:
    separations: tuple = (1e-1, 1e-2, 1e-3, 1e-4)


def main(cfg: Config):
    for lower, lam0 in (([0, 1], 2.0), ([0, 1, 2, 3], 4.0)):
        rep = degeneration_check(lower, lam0, separations=cfg.separations)
        print(f"lower values {lower}, collision at {lam0}")
        for key, errs in rep.errors.items():
            print(f"  {key:8} " + "  ".join(f"{e:.2e}" for e in errs))
        print(f"  monotone and within 0.05: {rep.passed(0.05)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--separations", type=float, nargs="+", default=list(Config.separations))
    main(Config(tuple(ap.parse_args().separations)))
