"""Walk the three bundled datasets through every applicable estimator.

Each dataset is a pair of 2x2 dual-record tables (one per stratum) whose
(out, out) cell is unobserved.  The classical two-list estimate assumes the
lists are independent; the dependent-capture estimators let a fraction of
each stratum repeat its first-list outcome on the second list and estimate
that fraction from the data.

Run:  python3 demos/real_data_tables.py
"""

from dualrec.boot import bootstrap
from dualrec.core import DualrecError
from dualrec.datasets import CHILDREN_DEATH, ENCEPHALITIS, MEADOW_VOLES
from dualrec.sim import apply_method


def show_pair(name, pair, ratio=None):
    print(f"\n=== {name} ===")
    for label, t in ((pair.label_a, pair.a), (pair.label_b, pair.b)):
        print(
            f"  {label:>8}: x11={t.x11:>3} x10={t.x10:>3} x01={t.x01:>3}  "
            f"(listed by either: {t.x0})"
        )
    methods = ["LP", "NOUR", "MME-I", "MLE-I", "MME-II", "MLE-II"]
    if ratio is not None:
        methods += ["WOLTER-1", "WOLTER-2"]
    print(f"  {'method':>8}  {'n_a':>6}  {'n_b':>6}  {'alpha':>7}")
    for method in methods:
        try:
            # the ratio is a constraint, so only the comparators built
            # around it get to see it
            wolter_ratio = ratio if method.startswith("WOLTER") else None
            fit = apply_method(method, pair, ratio=wolter_ratio)
        except DualrecError as e:
            print(f"  {method:>8}  refused: {type(e).__name__}: {e}")
            continue
        est = fit.estimates
        alpha = f"{est['alpha']:.4f}" if "alpha" in est else "-"
        print(f"  {method:>8}  {est['n_a']:>6.0f}  {est['n_b']:>6.0f}  {alpha:>7}")


def main():
    print("Dual-record population estimates on the bundled datasets")

    # Meadow voles: a live-trapping study.  The male stratum shows mild
    # positive dependence, so the dependence-aware estimates sit above the
    # independence-based LP value.  The trapping design suggests a known
    # male/female ratio of 1.147, which the ratio-linked comparators use.
    show_pair("meadow voles", MEADOW_VOLES, ratio=1.147)

    # Child death records from a sample registration system vs a survey.
    # Strong dependence: the moment and likelihood fits agree that the
    # independence estimate badly undercounts the male stratum.
    show_pair("children death records", CHILDREN_DEATH)

    # Japanese-encephalitis surveillance vs an active search.  The Nour
    # estimator refuses both strata (its x11^2 > x10*x01 condition fails)
    # and the adult stratum's dependence estimate clamps at zero.
    show_pair("encephalitis surveillance", ENCEPHALITIS)

    # Resampled uncertainty for the headline children-death estimate.
    print("\nparametric bootstrap for the children-death moment fit (b=1000):")
    res = bootstrap(CHILDREN_DEATH, "MME-I", scheme="parametric", b=1000, seed=0)
    for key in ("n_a", "n_b", "alpha"):
        lo, hi = res.ci[key]
        print(
            f"  {key:>5}: point {res.estimates[key]:>8.3f}  "
            f"se {res.se[key]:>7.3f}  95% ({lo:.2f}, {hi:.2f})"
        )
    print(
        "\nOnce the lists are allowed to agree more often than chance, the"
        "\nmale-children estimate rises well above the LP value (268 vs 231),"
        "\nand the uncertainty honestly widens with it."
    )


if __name__ == "__main__":
    main()
