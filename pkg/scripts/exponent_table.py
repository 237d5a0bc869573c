"""Print the full chain of integrability exponents over a parameter sweep.

Columns: the closed-form lower bound, the value at the closed-form maximizer,
the optimized interior exponent, the refined and abstract lower bounds, the
global exponent, and the upper bound with its conjectured ceiling.
"""

import argparse

import hessint as h


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=10, help="largest dimension (from 3)")
    ap.add_argument("--ratios", type=str, default="1,1.5,2,5,10",
                    help="comma-separated ellipticity ratios")
    ap.add_argument("--k", type=int, default=1, help="directional rank")
    args = ap.parse_args(argv)

    ratios = [float(x) for x in args.ratios.split(",") if x]
    cols = ("n", "ratio", "closed", "f(g*)", "interior", "refined",
            "abstract", "global", "upper", "conj")
    print(("{:>4} {:>6}" + " {:>10}" * 8).format(*cols))
    for n in range(3, args.n_max + 1):
        if args.k >= n:
            continue
        for ratio in ratios:
            r = h.compute_report(h.Ellipticity(n, ratio, args.k))
            print(f"{n:>4} {ratio:>6.2f} {r.closed_form_lower:>10.6f}"
                  f" {r.f_at_gamma_star:>10.6f} {r.epsilon_interior:>10.6f}"
                  f" {r.refined_lower:>10.6f} {r.abstract_lower:>10.6f}"
                  f" {r.epsilon_global:>10.6f} {r.epsilon_upper:>10.6f}"
                  f" {r.ass_conjecture:>10.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
