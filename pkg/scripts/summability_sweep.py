#!/usr/bin/env python3
"""
Sweep the sup-norm error of the Cesaro mean over Holder exponents and print
the fitted log-log slope next to -alpha.
"""

import numpy as np

from harmonic_lab.experiments import ExperimentConfig, run


def main() -> None:
    print(f"{'alpha':>6} {'slope':>9}")
    for alpha in (0.2, 0.3, 0.5, 0.7, 0.9):
        table = run(ExperimentConfig("converge", function=f"holder({alpha})", schedule={"dyadic": [16, 1024]}))
        n, err = np.array(table.column("param")), np.array(table.column("error"))
        slope = np.polyfit(np.log(n), np.log(err), 1)[0]
        print(f"{alpha:6.2f} {slope:9.4f}")


if __name__ == "__main__":
    main()
