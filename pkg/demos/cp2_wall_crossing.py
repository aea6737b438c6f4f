"""Walk the B-field across the wall on CP^2 and watch E and E* swap verdicts.

E has rank 3, F has rank 2, both with c1 = 0 and c2 = 1.  With the Todd-corrected
charge the wall sits at b = 3/4; with the dHYM charge it sits at b = 0.
"""

from fractions import Fraction

from zstab.problem import load_problem
from zstab.stability import asym_stable


def verdicts(name, b):
    prob = load_problem(f"examples/{name}", {"sigma": "1", "b": str(b)})
    e, f = prob.bundles["E"], prob.bundles["F"]
    ed = e.dual()
    kernel = ed - f.dual()
    return (asym_stable(prob.charge, e, [f]).aggregate,
            asym_stable(prob.charge, ed, [kernel]).aggregate)


for name, wall in (("cp2_dhym", Fraction(0)), ("cp2_td", Fraction(3, 4))):
    print(f"{name}: wall at b = {wall}")
    for b in (wall - 1, wall - Fraction(1, 8), wall, wall + Fraction(1, 8), wall + 1):
        e, ed = verdicts(name, b)
        print(f"  b = {str(b):>5}   E: {e:<10}  E*: {ed}")
