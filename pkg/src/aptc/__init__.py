"""Workbench for a truly concurrent process algebra.

Normalize process terms, compile them to prime event structures or finite
step transition systems, decide truly concurrent bisimulation equivalences,
reason about recursive specifications, and verify the alternating bit
protocol.
"""

from .terms import (  # noqa: F401
    Abstract, Alt, Atom, Comm, ConflictElim, DELTA, Encap, EventLabel,
    FullPar, Par, Project, RecCall, RecSpec, Rename, Seq, Signature,
    SpecFile, TAU, Term, Unless, alt_of, canonical_print, eq_ac, flatten,
    make_signature, par_of, parse_label_text, parse_spec, parse_term,
    seq_of, shadow, validate_signature, ParseError,
)
from .rewrite import (  # noqa: F401
    RewriteTrace, is_basic, lpo_check, normalize,
)
from .pes import (  # noqa: F401
    PES, compile_basic, configurations, direct_compile, export_pes,
    pomset_transitions, step_transitions, weak_pomset_transitions,
)
from .equiv import (  # noqa: F401
    branching_bisim_pes, branching_step_bisim_lts,
    rooted_branching_bisim_pes, strong_bisim, strong_step_bisim_lts,
    weak_bisim,
)
from .lts import (  # noqa: F401
    GuardReport, StepLTS, check_guarded_linear, explore, export_aldebaran,
    sos_steps,
)
from .recursion import (  # noqa: F401
    AipResult, aip_check, cfar_apply, project_n, rdp_unfold, rsp_check,
)
from .abp import build_abp, verify_abp  # noqa: F401
from .errors import ResourceBound, UnguardedRecursion  # noqa: F401

__version__ = "0.1.0"
