"""Forcing over finite conditions, interpretations and functors between categories of copies."""
from types import ModuleType as _ModuleType

from .core import (BUILTINS, BackAndForthFailure, FinitePerm, InsufficientOracle, PartialAutomorphism,
                   PartialInjection, RejectedInput, Signature, Structure, UndecidedAtDepth,
                   extend_partial_automorphism, pullback, table_structure)
from .logic import (BOTTOM, TOP, CompAtom, ComplexityTag, CountAnd, CountOr, FinAnd, FinOr, IndexedFamily,
                    ListFamily, RelAtom, ValAtom, classify, holds, is_restricted, negat)
from .forcing import (FORCES, FORCES_NEGATION, UNDECIDED, Bounds, Condition, DefinableRelation, ForcingEngine,
                      ForcingVerdict, GenericBudget, build_generic, decide, definability_compile, forces,
                      restrict_check, truth_lemma_check)
from .functors import (ConstantFunctor, FracFieldFunctor, FunctorOperator, IdentityFunctor, Morphism,
                       NaturalTransformation, check_adjoint_equivalence, check_functor_laws, check_natural_iso,
                       copy_iso, functor_by_name, make_copy, sample_copies)
from .interp import (Interpretation, check_witness, induced_functor, interpret, interpretation_by_name, tau)
from .extract import (Extraction, extract_domain, extract_quotient, extract_relation, extract_sim, frak_F,
                      verify_extraction)
from .biequiv import (BiInterpretation, PreconditionFailed, adjoint_from_biinterp, biinterp_from_adjoint,
                      biinterpretation_by_name)
from .indisc import check_absolute_indiscernibility, extract_indiscernibles, trivial_reduct
from .dsl import DSLError, load_registry, parse_formula, parse_program
from .report import CheckRecord, Report
from .suites import SUITES, SessionConfig, run_suite

__all__ = [name for name, value in dict(globals()).items()
           if not name.startswith("_") and not isinstance(value, _ModuleType)]
