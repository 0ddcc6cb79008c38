"""Group structures for three decreasing codes.

For each code we build the information set from its generator monomials,
then print
  * the affine automorphism group (a BLTA block structure),
  * the SC-invariant subgroup and its size,
  * the size of the older [2,1,...,1] invariant subgroup,
  * the number of equivalence classes an ensemble can draw from.
"""

from polar_automorph import (
    BlockStructure,
    automorphism_group,
    blta_order,
    closure_from_z,
    count_classes,
    dec_group,
    format_factored,
)

CODES = [
    # (m, generator monomials as z-labels)
    (8, [31, 57]),
    (7, [23, 25]),
    (6, [24]),
]


def main():
    header = f"{'(n,K)':>10} {'I_min':>10} {'Aut':>12} {'invariant':>16} {'order':>10} {'[2,1..]':>9} {'classes':>8}"
    print(header)
    print("-" * len(header))
    for m, zs in CODES:
        info = closure_from_z(m, zs)
        aut = automorphism_group(info)
        inv = dec_group(info)
        base = BlockStructure([2] + [1] * (m - 2))
        classes = count_classes(info).classes
        print(f"{str((info.n, info.k)):>10} {str(zs):>10} {str(list(aut.sizes)):>12} "
              f"{str(list(inv.sizes)):>16} {format_factored(blta_order(inv)):>10} "
              f"{format_factored(blta_order(base)):>9} {classes:>8}")

    # the older estimate of the invariant group is smaller, so it overcounts classes
    info = closure_from_z(8, [31, 57])
    old = count_classes(info, inv_structure=BlockStructure([2, 1, 1, 1, 1, 1, 1])).classes
    new = count_classes(info).classes
    print(f"\n(256,128): {old} classes with the [2,1,...,1] subgroup, {new} with the complete one")


if __name__ == "__main__":
    main()
