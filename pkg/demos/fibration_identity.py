"""Compare the directly computed A with the closed form B rE^rE (rE dF - rF dE).

The two differ by the factor -1/(rE + 1) for every pair; both vanish on equal slopes.
"""

from zstab.fibration import ProjBundleDegeneration, a_identity_check

print(" rE rF        B   A / closed")
for row in (a_identity_check(ProjBundleDegeneration(rE, rF)) for rE in range(2, 7) for rF in range(1, rE)):
    print(f"{row['rE']:>3}{row['rF']:>3}{str(row['B']):>9}   {row['ratio_A_to_closed']}")

eq = a_identity_check(ProjBundleDegeneration(4, 2, d_e=6, d_f=3))
print("equal slopes (rE, rF, dE, dF) = (4, 2, 6, 3): A =", eq["A_value"])
