"""Decompose SL(2) representations attached to the three Fano threefold models."""

from zstab import sl2

print("Sym^2(s4) =", sl2.format_rep(sl2.decompose_product("sym2", sl2.s(4))))
print("wedge^2(s5) =", sl2.format_rep(sl2.decompose_product("wedge2", sl2.s(5))))
print("gl(s6) =", sl2.format_rep(sl2.gl(sl2.s(6))))
print("sl(s5) =", sl2.format_rep(sl2.sl(sl2.s(5))))
print()
for model in sl2.MODELS:
    d = sl2.deformation_space(model)
    print(f"{model:>4}: deformations {d['deformation_space'] or '0'} (dim {d['dimension']})")
print()
# binary forms of degree 12: one zero of multiplicity m plus simple zeros
for m in (5, 6, 7):
    zeros = [("a", m)] + [(f"z{i}", 1) for i in range(12 - m)]
    print(f"degree 12, top multiplicity {m}: {sl2.git_classify(12, zeros)}")
