#!/usr/bin/env python3
"""Count quasi-identity repairs over every single-pair congruence of the module catalog.

Repairs are merges forced by  a m <= m  =>  a* m <= m  after the plain
congruence closure; in the finite case none are expected.
"""

import itertools

from kleene_morita import catalog, congruence_closure


def main():
    total = repaired = 0
    for name, M in catalog.modules().items():
        if M.size > 64:
            continue
        n = 0
        for x, y in itertools.combinations(range(M.size), 2):
            gen = congruence_closure(M, [(x, y)])
            total += 1
            n += bool(gen.repairs)
        repaired += n
        print(f"{name:<36} |M| = {M.size:<4} repaired {n}")
    print(f"{repaired} of {total} closures needed a repair")


if __name__ == "__main__":
    main()
