"""Deontic simplicial logic and its dynamic extension.

The public API re-exports the most used names from the submodules.
"""

from .checker import CheckContext, satisfies, truth_table, valid_in_model
from .complex import (
    Prop,
    SimplicialModel,
    Vertex,
    build_model,
    canonical_key,
    color_set,
    dimension,
    faces,
    is_isomorphic,
    is_pure,
    label_set,
    link,
    skeleton,
    star,
)
from .dynamics import (
    EmptyProduct,
    UpdateModel,
    build_update_model,
    compose,
    eval_action_box,
    identity_update,
    precondition_formula,
    product_update,
)
from .errors import *  # noqa: F401,F403
from .formula import (
    ActionBox,
    ActionRef,
    And,
    Atom,
    Commit,
    Formula,
    Not,
    parse,
    subformulas,
    to_text,
)
from .io import export_dot, load_model, load_update, save_model, save_update, to_dot
from .translation import TranslationReport, complexity, translate
from .validity import (
    Counterexample,
    EnumerationBounds,
    ValidUpToBound,
    axiom_suite,
    check_validity,
    enumerate_models,
)

print_formula = to_text

__version__ = "0.1.0"
