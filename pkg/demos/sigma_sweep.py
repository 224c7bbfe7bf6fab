"""Sweep the separation parameter and watch exactness switch on.

The generator places cluster hubs sigma * radius apart. Above sigma = 2 the
planted optimum provably survives every 2-perturbation, and the certifier,
both 2-approximations, and the oracle agree on every sample; below 2 the
guarantee lapses and the heuristics start disagreeing with the oracle. The
table prints the agreement fraction per sigma and the empirical transition.
"""

from fractions import Fraction

from resilient_cluster import (
    GONZALEZ,
    HOCHBAUM_SHMOYS,
    KC,
    KCENTER,
    GeneratorConfig,
    brute_force,
    certify,
    generate,
    recover_via_2approx,
)


def four_way_agreement(inst) -> bool:
    oracle = brute_force(inst, KCENTER)
    if not oracle.unique:
        return False
    key = oracle.best.partition_key()
    verdict = certify(inst, KC)
    if (
        verdict.kind != "OPTIMAL"
        or verdict.lp_radius != oracle.cost
        or verdict.clustering.partition_key() != key
    ):
        return False
    return all(
        recover_via_2approx(inst, alg).partition_key() == key
        for alg in (GONZALEZ, HOCHBAUM_SHMOYS)
    )


grid = [Fraction(s) for s in ("6/5", "3/2", "9/5", "21/10", "5/2", "3", "4")]
seeds = range(40)

print(f"{'sigma':>6} | agreement")
print("-" * 24)
transition = None
for sigma in grid:
    hits = 0
    for seed in seeds:
        inst, _ = generate(
            GeneratorConfig(
                n=8 + seed % 5,
                k=2 + seed % 3,
                sigma=sigma,
                seed=seed,
                allow_weak_separation=True,
            )
        )
        hits += four_way_agreement(inst)
    frac = hits / len(seeds)
    if transition is None and frac == 1.0:
        transition = sigma
    print(f"{float(sigma):>6.2f} | {hits:>3}/{len(seeds)} = {frac:.2f}")

print(f"\nempirical transition to full agreement: sigma = {float(transition):.2f}")
print("(instances with sigma > 2 are resilient by construction, so full")
print("agreement at and above 2.1 is the guarantee at work; saturation slightly")
print("below 2 just means these planted samples are benign before the guarantee kicks in)")
