#!/usr/bin/env python3
"""Walk a random charge-two point through the configuration calculus:
glue two charge-one pieces, factor the result back, classify it against
the gluing locus, and trace the retraction onto that locus."""

import argparse
from fractions import Fraction
from random import Random

from blowup_moduli.gluing import (
    boxplusL,
    boxplusL_inverse,
    classify_C_image,
    default_delta,
    glued_pair_from_left,
    homotopy_H2,
    neighborhoods_left,
    pair_side_image,
)
from blowup_moduli.monad import config_to_json, du_points, nondegenerate
from blowup_moduli.sampling import (
    random_nz_member,
    random_s0_member,
    standard_centers,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = Random(args.seed)

    centers = standard_centers()
    delta = default_delta(centers)
    nb = neighborhoods_left(centers)
    print(f"centers: xL={centers.xL}, xR={centers.xR}, delta={delta}")

    s0 = random_s0_member(rng, delta)
    m2 = random_nz_member(rng, centers.z, delta)
    glued = boxplusL(s0, m2)
    print("\nglued charge-two configuration (left chart):")
    print(config_to_json(glued))
    print("nondegenerate:", nondegenerate(glued))

    f = boxplusL_inverse(glued, nb)
    print("\nfactorisation recovers the pieces:")
    print("  blow-up factor d' =", f.m1.d[0, 0])
    print("  plane factor a1'' =", f.m2.a1[0, 0])

    verdict = classify_C_image(glued, centers)
    print("\ngluing-locus classification:", "InImage" if verdict.in_image else f"NotInImage ({verdict.reason})")

    pair = glued_pair_from_left(glued, centers)
    for t in (Fraction(1), Fraction(1, 2), Fraction(0)):
        out = homotopy_H2(pair, t)
        left_img = pair_side_image(out, "left")
        v = classify_C_image(left_img, centers)
        print(f"retraction t={t}: left image in locus: {v.in_image}")

    print("\nideal charge of the t=0 plane image:")
    from blowup_moduli.gluing import direct_image, untranslate

    plane = untranslate(direct_image(pair_side_image(homotopy_H2(pair, 0), "left")), centers.xL)
    for p in du_points(plane):
        print(f"  {p.surface} point at ({p.l1}, {p.l2})")


if __name__ == "__main__":
    main()
