"""boundlab: a symbolic workbench for boundedness counterexamples.

Basic opens over bounded sequence spaces, good-extension fusion, opens
over eventually periodic sets, staged escape schedules, and two
counterexample labs over a small indexed machine — all with replayable
JSON certificates and a command-line surface.
"""

from .errors import (
    AmbiguousAmalgamation,
    BadCandidate,
    BadCertificate,
    BudgetExhausted,
    DomainError,
    EmptyOpenError,
    IncompatibleSeq,
    InconsistentTermFamily,
    NoStabilization,
    NotAPoint,
    NotASubopen,
    OracleNotTotal,
    PointNotInOpen,
    ScheduleUnsound,
    SplitOutOfRange,
    TermNotTotal,
    TheoremViolated,
)
from .seq_opens import (
    EMPTY,
    BasicOpen,
    BoundSchedule,
    Point,
    canonical_point,
    compatible_nodes,
    force_value_into_range,
    forces_G_value,
    intersect,
    is_empty,
    make_open,
    member,
    restrict_by_seq,
    schedule_of,
    split,
    subset,
)
from .terms import (
    DecisionTerm,
    GuardedTerm,
    RangeTerm,
    TermSequence,
    amalgamate,
    constant_term,
    decide_guarded,
    decide_term,
    identity_term,
    is_pseudobounded_violation,
    range_term_from,
    restrict_term,
)
from .fusion import (
    bound_range_term,
    bound_range_term_at,
    dc_chain,
    extract_witness,
    extract_witness_at,
    fuse_pseudobound,
)
from .set_opens import (
    PeriodicSet,
    SetOpen,
    canonical_set_point,
    compatible_extension_check,
    finite_set,
    forces_in_generic,
    intersect_set,
    member_set,
    sequential_bound,
    set_open,
    subset_open,
    unbounded_step,
)
from .antispecker import (
    BoundedTree,
    StarOracle,
    all_star_oracle,
    build_escape_schedule,
    enumerate_level,
    escape_trace,
    nonstar_nodes,
)
from .machine import (
    Expr,
    TotalityCertificate,
    alias_certificate,
    apply_free,
    certificate_for,
    check_proof,
    decode,
    encode,
    eval_profile,
    eval_steps,
    format_program,
    parse_program,
)
from .realizability import (
    FiniteSupportFn,
    VTrace,
    enumerate_Az,
    make_F_beta,
    pseudobound_scenario,
    seq_continuity_bound,
    unbounded_witness,
    v,
)
from .certificates import build, verify

__version__ = "0.1.0"
