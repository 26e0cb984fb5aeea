"""Preprocessing toolkit for vertex multiway cut.

Separator machinery (minimum and important separators, witnesses), ordered
set families with principal-set enumeration and counting audits, terminal
squeezing and kernel construction, plus brute-force oracles that validate
all of it on small instances.
"""

from .graph import (
    Graph,
    MwcInstance,
    ParseError,
    SeparatorInstance,
    VertexSet,
    contract_outside,
    generate_lowerbound,
    generate_random,
    induced_subgraph,
    parse_instance,
    parse_separator_instance,
    random_separator_instance,
    serialize_instance,
    serialize_separator_instance,
)
from .separators import (
    ExcessBudget,
    Separator,
    is_important,
    iter_important_separators,
    min_separator,
    not_reachable,
    precedes,
    separates,
    smallest_important_separator,
    witness,
)
from .families import (
    AxiomReport,
    CountingAudit,
    EnumeratedFamily,
    FamilyOrderError,
    ImportantSeparatorFamily,
    PrincipalFamilyReport,
    check_axioms,
    counting_audit,
    derive_structure,
    enumerate_principal,
    parse_family_text,
    union_of_excess,
)
from .kernelizer import (
    UNKNOWN,
    ExactProvider,
    GreedyProvider,
    KernelOutcome,
    KernelResult,
    PipelineError,
    SqueezeResult,
    greedy_mwc,
    kernelize,
    min_isolating_cut,
    solve_exact,
    squeeze_terminals,
)
from .oracle import (
    OracleBudget,
    OracleBudgetError,
    bruteforce_opt_within,
    enum_important,
    enum_mwc_cuts,
    enum_separators,
    exact_mwc_bruteforce,
    is_multiway_cut,
    max_disjoint_paths,
)

__version__ = "0.1.0"
