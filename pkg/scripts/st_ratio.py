"""Measure |<ST, T>| / (|T|^2 |S|) and |S| / bound on the known flat biharmonic pmc surfaces."""
import math

from cpn_biharmonic.biharmonic import solve_case_ii
from cpn_biharmonic.catalog import case_iii_surface, torus_cp2
from cpn_biharmonic.simons import s_operator, st_ratio
from cpn_biharmonic.surfaces import fundamental_data


def main():
    print(f"{'surface':<14} {'st_ratio':>12} {'|S|':>12} {'bound':>12} {'|S|/bound':>10}")
    for rho in (1.0, 3.0, 10.0):
        d = solve_case_ii(rho)
        st = s_operator(d, rho)
        print(f"{'data rho=' + format(rho, 'g'):<14} {st_ratio(d, st):12.9f} {st.normS:12.6g} {st.bound:12.6g} "
              f"{st.normS / st.bound:10.4f}")
    for chart in (torus_cp2("plus"), torus_cp2("minus"), case_iii_surface()):
        vals = []
        for u, v in chart.grid(3):
            fd = fundamental_data(chart, u, v)
            st = s_operator(fd, chart.rho)
            vals.append((st_ratio(fd, st), st.normS, st.bound))
        r, s, b = max(vals, key=lambda t: t[1] / t[2])
        print(f"{chart.name:<14} {r:12.9f} {s:12.6g} {b:12.6g} {s / b:10.4f}")
    print(f"1/sqrt(2) = {1 / math.sqrt(2):.9f}")


if __name__ == "__main__":
    main()
