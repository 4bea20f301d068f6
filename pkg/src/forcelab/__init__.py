"""forcelab: finite Boolean-valued models of set theory, ultrafilter quotients and forcing."""
from .algebra import (BooleanAlgebra, Element, Ultrafilter, big_join, big_meet, complement,
                      implies, join, leq, make_algebra, meet, ultrafilters)
from .errors import LabError
from .lang import desugar, free_vars, parse, substitute, to_text
from .names import (HFSet, Name, NameUniverse, check_name, check_universe, load_names,
                    parse_hf, powerset_name, universe_up_to_rank)
from .order import Poset, complete, is_dense, is_filter, is_generic, load_poset
from .valuation import ValuationContext, val_eq, val_formula, val_mem, val_subset
from .quotient import build_quotient, mostowski_collapse, truth
from .forcing import (Condition, LazyCohenPoset, cohen_poset_finite, dense_distinct, dense_point,
                      forces, hit_dense_sets, union_of_filter)

__version__ = "0.1.0"
