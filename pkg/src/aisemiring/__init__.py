"""Finite additively idempotent semirings: matrix semirings, identities and derivations."""
from .errors import (AssignmentError, CapacityError, FormatError, ParseError,
                     PreconditionError, ReconstructionError, SemiringError,
                     StepMismatchError, UnknownNameError)
from .identities import GROUPS, IDENTITIES, identity, resolve_keys
from .matrix import (ElementMap, LazyMatrixSemiring, MatrixSemiring, constant_embedding,
                     find_isomorphism, m2m2, matrix_semiring, padding_embedding,
                     phi_block_embedding, reconstruct_m2m2_labels, subsemiring_closure,
                     verify_homomorphism)
from .satisfaction import (equational_agreement, evaluate, necessary_conditions,
                           satisfies, satisfies_basis, syntactic_criterion)
from .semiring import (CATALOG_NAMES, FiniteSemiring, catalog, direct_product,
                       load_semiring, natural_order, verify_ai_axioms, zero_element)
from .terms import (Identity, SimpleIdentity, Term, normalize, parse_identity,
                    parse_term, reduce_identity, term, term_stats, word_stats)

__version__ = "0.1.0"
