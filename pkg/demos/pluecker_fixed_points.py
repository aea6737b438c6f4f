"""The Grassmannian model behind V22: fixed points, Jacobian ranks and generic rank."""

from zstab import pluecker

model = pluecker.build_model()
for fp in pluecker.fixed_point_weights(model):
    print(f"{fp.name:>12}  weight {fp.cstar_weight:>3}  Jacobian rank {pluecker.jacobian_rank(model, fp.alpha)}")

rep = pluecker.generic_rank(model, samples=20, seed=pluecker.DEFAULT_SEED)
print(f"generic rank over {rep['samples']} samples (seed {rep['seed']}): {rep['generic_rank']}")
for key, ok in pluecker.kernel_checks().items():
    print(f"{key}: {ok}")
