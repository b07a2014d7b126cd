"""pi_2, k-invariants and the hyperbolic change of basis for the E and F models."""

from twotype.fourman import builtin, form_parameter, hyperbolic_change, hyperbolic_form, k_invariant_data, pi2
from twotype.groupring import render_ring_elt


def main() -> None:
    for name in ("E", "F"):
        C = builtin(name)
        lifts = [k_invariant_data(C, v) for v in (0, 1)]
        n = form_parameter(C.form)
        hc = hyperbolic_change(n, lifts[0].k)
        H = hyperbolic_form(n)
        print(f"{name}: pi2 = {pi2(C)}, H3 = {lifts[0].h3}")
        print(f"  raw k (declared basis) = {lifts[0].k}, second lift gives {lifts[1].k}")
        print(f"  n = {n}, residue = {hc.residue}, shift c = {hc.shift}, k = {hc.k_new}")
        print("  form after change:", [[render_ring_elt(e) for e in r] for r in H.rows])


if __name__ == "__main__":
    main()
