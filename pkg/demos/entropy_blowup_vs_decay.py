"""Sequence entropy along progression families: blow-up vs decay.

The fair Bernoulli shift keeps one full bit of entropy per family element
no matter how sparse the progression gets, because distinct coordinates of
the shift are independent.  A rotation (here a high-denominator
continued-fraction convergent of the golden mean, so all arithmetic stays
exact) goes the opposite way: its joins only ever translate the two cuts
of the halves partition, so atom counts grow linearly and the per-element
entropy decays toward zero.

Run:  python3 demos/entropy_blowup_vs_decay.py
"""
from seqent import (
    BernoulliSystem,
    IntervalPartition,
    entropy_trace,
    golden_rotation,
    make_progression_family,
)

J_VALUES = [2, 4, 8, 16, 32]


def main():
    maker = lambda j: make_progression_family(j, j)  # P_j = {j, 2j, ..., j*j}

    print("fair Bernoulli shift, generating partition")
    print(f"{'j':>4} {'|P_j|':>6} {'H(join) bits':>14} {'h_j':>10}")
    bernoulli = entropy_trace(BernoulliSystem.fair(), 1, maker, J_VALUES)
    for row in bernoulli.rows:
        print(f"{row.j:>4} {row.family_size:>6} {row.entropy_bits:>14.6f} {row.h:>10.6f}")
    print(f"max/min over the computed range (finite proxies, not limits): "
          f"{bernoulli.h_max_proxy():.6f} / {bernoulli.h_min_proxy():.6f}")

    print()
    print("golden-convergent rotation, halves partition")
    print(f"{'j':>4} {'|P_j|':>6} {'H(join) bits':>14} {'h_j':>10}")
    rotation = entropy_trace(
        golden_rotation().to_iet(), IntervalPartition.halves(), maker, J_VALUES
    )
    for row in rotation.rows:
        print(f"{row.j:>4} {row.family_size:>6} {row.entropy_bits:>14.6f} {row.h:>10.6f}")
    print(f"max/min over the computed range (finite proxies, not limits): "
          f"{rotation.h_max_proxy():.6f} / {rotation.h_min_proxy():.6f}")


if __name__ == "__main__":
    main()
