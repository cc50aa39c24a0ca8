"""Relative commutators, verbal ideals and central extensions of finite groups and loops."""

from .algebra import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    Ideal,
    PairAlgebra,
    congruence_generated,
    full_ideal,
    ideal_closure,
    is_pullback_square,
    kernel,
    kernel_pair,
    product_ideal,
    pullback,
    quotient,
    trivial_ideal,
    validate,
)
from .commutators import (
    associator_subloop,
    associator_sweep,
    double_centrality_sweep,
    ideal_lattice,
    relcomm_loops,
    relcomm_oracle,
    relcomm_words,
)
from .corpus import bundled, gen_loops, load
from .errors import RelcommError
from .galois import (
    DoubleExtension,
    Extension,
    centralisation,
    double_relation,
    is_central_extension,
    is_double_central,
    is_double_extension,
    is_trivial_extension,
    relative_commutator_of_extension,
)
from .varieties import AB, GP, VarietyDescriptor, get_variety, in_subvariety, nil, reflection, sol, verbal_subobject
from .words import Word, eval_word, parse_word

__version__ = "0.1.0"
