"""Compare the closed-form moment solutions with the likelihood fits.

Two facts drive this demo:

* With first-order Stirling log-factorials (the fitting default), the
  dependent-stratum likelihood is stationary exactly at the moment solution,
  so the two estimators coincide up to optimizer tolerance.
* With exact log-gamma factorials the likelihood surface shifts a little,
  and the fitted sizes drop by a few percent on strongly dependent data.

Run:  python3 demos/moment_vs_likelihood.py
"""

import numpy as np

from dualrec.datasets import CHILDREN_DEATH, MEADOW_VOLES
from dualrec.mle import FitConfig, mle_model_i, mle_model_ii, profile_objective
from dualrec.mme import mme_model_i, mme_model_ii
from dualrec.model import ModelIParams


def report(tag, fit):
    e, d = fit.estimates, fit.diagnostics
    print(
        f"  {tag:>22}: n_a {d['n_a_unrounded']:>9.3f}  n_b {d['n_b_unrounded']:>9.3f}"
        f"  alpha {e['alpha']:.4f}"
    )


def main():
    print("children death records, dependent-stratum model")
    moment = mme_model_i(CHILDREN_DEATH)
    report("moment (closed form)", moment)
    report("likelihood (default)", mle_model_i(CHILDREN_DEATH))
    report("likelihood (exact)", mle_model_i(CHILDREN_DEATH, FitConfig(logfac="exact")))

    # Profile the default-mode likelihood over n_a around the moment value:
    # the grid argmax lands on the moment estimate.
    e, d = moment.estimates, moment.diagnostics
    theta = ModelIParams(
        n_a=d["n_a_unrounded"],
        n_b=d["n_b_unrounded"],
        alpha_a=e["alpha"],
        p1=e["p1"],
        p2a=e["p2a"],
        p2b=e["p2b"],
    )
    grid = np.arange(d["n_a_unrounded"] - 20.0, d["n_a_unrounded"] + 20.5, 0.5)
    profile = profile_objective(
        "I", CHILDREN_DEATH, theta, "n_a", grid, logfac="stirling1"
    )
    best = max(profile, key=lambda point: point[1])[0]
    print(
        f"  grid argmax of the first-order likelihood: {best:.1f} "
        f"(moment value {d['n_a_unrounded']:.1f})"
    )

    print("\nmeadow voles, shared-dependence model")
    report("moment (closed form)", mme_model_ii(MEADOW_VOLES))
    report("likelihood (default)", mle_model_ii(MEADOW_VOLES))
    print(
        "\nOn this data the shared-dependence likelihood is stationary at the"
        "\nmoment solution, so the default fit reproduces it to the optimizer"
        "\ntolerance; the exact-factorial children fit lands a few percent"
        "\nlower than the moment solution, which is the expected shift."
    )


if __name__ == "__main__":
    main()
