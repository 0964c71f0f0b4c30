"""How many continuous branches does the generic rule have?

On fully generic queries the planner's behavior is constant on each pair of
(start ordering, goal ordering).  The number of such pairs is
((n+m)!)^2 / m!; we verify the closed form against brute enumeration for
small sizes, print how fast it grows, and walk one swap sequence.
"""

import itertools

from parammp import (
    ConfigurationQuery,
    FrameMode,
    component_count,
    make_frame,
    orderings,
    transposition_sequence,
)


def brute_force(n, m):
    symbols = [("r", i) for i in range(n)] + [("o", j) for j in range(m)]
    count = 0
    for sigma in itertools.permutations(symbols):
        obstacle_order = [s for s in sigma if s[0] == "o"]
        for sigma_prime in itertools.permutations(symbols):
            if [s for s in sigma_prime if s[0] == "o"] == obstacle_order:
                count += 1
    return count


def main():
    print("ordering pairs (closed form vs. brute enumeration):")
    for n, m in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)]:
        exact = component_count(n, m)
        brute = brute_force(n, m)
        print(f"  n={n}, m={m}: {exact:>10,}  (enumerated: {brute:,})")
        assert exact == brute
    print()
    print("growth at swarm scale:")
    for n, m in [(3, 3), (5, 3), (8, 4)]:
        print(f"  n={n}, m={m}: {component_count(n, m):,}")

    print()
    print("one concrete sort: robot 0 must cross two obstacles, robot 1 one:")
    query = ConfigurationQuery(
        starts=[[0.0, 1.0, 0.0], [3.0, 2.0, 0.0]],
        goals=[[4.0, 3.0, 0.0], [7.0, 4.0, 0.0]],
        obstacles=[[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [6.0, 0.0, 0.0]],
    )
    pair = orderings(query, make_frame(query, FrameMode.FIXED))
    for step, swap in enumerate(transposition_sequence(pair.sigma, pair.sigma_prime)):
        print(f"  step {step + 1}: {swap}")


if __name__ == "__main__":
    main()
