"""
volsplit

Weighted L2 boundedness of Volterra integral operators with degenerate kernels
K(x, t) = sum_k a_k(x) t^k, checked by splitting into rank-one components.

Usage:
    volsplit <command> [options]

Commands:
    check-doubling    Doubling constant of a weight
    hardy             Hardy operator criterion
    split-criteria    Component suprema S_k of a degenerate kernel
    rl-criteria       Criteria for fractional integration
    op-norm           Norm of the discretized operator
    split-experiment  Norm ladder of an operator and its components
    counterexample    Fractional integration where splitting fails
    orthopoly         Orthogonal polynomials, root spacing and mass sets
    gram              Gram determinant ratio along a ladder
    witness           Split witness along a ladder
    lemma35           Closed-form constrained minimum (alias: constrained-min)
    multiplier        Pointwise multipliers between weighted Sobolev spaces

Examples:
    volsplit hardy --u 1 --v 1/x
    volsplit split-criteria --kernel 1 x --u 1 --v "(1+x)^-3"
    volsplit orthopoly --weight 1 --r 1 --n 2
    volsplit counterexample -o counterexample.json
"""

__version__ = "0.1.0"
