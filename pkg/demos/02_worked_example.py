"""The m = 4 worked example, end to end.

The code has I_min = {x1 x4, x2 x3}.  Every invertible 4x4 matrix is an
automorphism, but only BLTA([2,1,1]) commutes with SC.  We
  1. trace the invariance decision for the structure <3,1>,
  2. take a concrete matrix with that structure (swap a1 <-> a3),
  3. let the commuting oracle produce an LLR vector on which
     SC(pi(y)) != pi(SC(y)),
  4. and show the same probe machinery finds nothing for an invariant map.
"""

import numpy as np

from polar_automorph import (
    AffineMap,
    BlockStructure,
    Gf2Matrix,
    InfoSet,
    apply_perm,
    automorphism_group,
    commute_oracle,
    dec_aut,
    dec_group,
    perm_from_affine,
    sample_blta,
    sc_decode,
)


def show_trace(verdict):
    for step in verdict.trace:
        pad = "  " * step.depth
        print(f"{pad}structure {list(step.structure)} on z-labels {step.info_z}: "
              f"{step.branch} -> {step.verdict}")


def main():
    info = InfoSet.from_z(4, [3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15])
    print("information set (z):", info.z_labels())
    print("automorphism group :", automorphism_group(info))
    print("invariant group    :", dec_group(info))

    print("\ninvariance decision for <3,1>:")
    verdict = dec_aut(BlockStructure([3, 1]), info)
    show_trace(verdict)

    swap = Gf2Matrix.from_array([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    t = AffineMap(swap, 0)
    rng = np.random.default_rng(1)
    res = commute_oracle(swap, 0, info, 200, rng)
    print(f"\noracle on a1<->a3: commutes={res.commutes} ({res.kind} probe #{res.index})")
    y = res.counterexample
    p = perm_from_affine(t)
    lhs = sc_decode(info, apply_perm(p, y)).codeword
    rhs = apply_perm(p, sc_decode(info, y).codeword)
    print("  y          :", np.array2string(y, precision=3, max_line_width=200))
    print("  SC(pi(y))  :", lhs)
    print("  pi(SC(y))  :", rhs)

    t_ok = sample_blta(dec_group(info), rng)
    res_ok = commute_oracle(t_ok.matrix, t_ok.shift, info, 1000, rng)
    print(f"\noracle on a random BLTA([2,1,1]) map: commutes={res_ok.commutes} "
          f"over {res_ok.trials} probes")


if __name__ == "__main__":
    main()
