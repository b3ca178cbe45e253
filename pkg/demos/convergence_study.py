"""A small convergence study printed as per-kind error/EOC columns.

Runs the first manufactured case with the penalty mu(h) = 40 h over a short
mesh sequence and prints every error kind with its experimental orders.
The squared norms halve their exponent: orders near 2 mean first-order
fields, orders near 4 mean second-order fields.

The sequence here is deliberately small so the demo finishes in seconds;
the command line runs the full sequences, e.g.

    elastodiff study --case A --preset 40h --out study_out
"""

from elastodiff import KINDS, StudySpec, run_study

N_VALUES = (21, 41, 81)


def main():
    spec = StudySpec(case="A", c_mu=40.0, r=1.0, n_values=N_VALUES)
    print(f"case {spec.case}, mu(h) = {spec.c_mu:g} h^{spec.r:g}, "
          f"N in {spec.n_values} ...")
    result = run_study(
        spec, progress=lambda n, s, err: print(f"  N={n}: {s:.1f}s")
    )

    for kind in KINDS:
        errors, orders = result.table.column(kind)
        print(f"\n{kind}")
        print("  N     error        EOC")
        for n, err, order in zip(spec.n_values, errors, orders):
            eoc = "  --  " if order is None else f"{order:.4f}"
            print(f"  {n:<5d} {err:.4e}   {eoc}")


if __name__ == "__main__":
    main()
