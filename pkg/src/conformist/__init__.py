"""Exact arithmetic and finite verification for the conformist subshift.

The ambient group is a lamplighter: a finite lamp group summed over the
integers, extended by the shift. A configuration assigns a bit to every
group element, and the conformist condition demands that each bit be the
strict nonunanimous majority of the bits one shift level down. This package
provides the group arithmetic, the explicit configuration witnessing
nonemptiness, a window search engine over the forbidden patterns, and
certificates that no configuration is invariant under suitable subgroups.
"""

from .aperiodicity import (
    ContradictionCertificate,
    DescriptorError,
    LampDecomposition,
    SubgroupDescriptor,
    certificate_to_json,
    certify,
    check_certificate,
    decompose,
    make_sum_kernel,
    transfer_generators,
)
from .balls import BallSizeError, ball, generating_set
from .elements import (
    Elem,
    ElementSyntaxError,
    format_element,
    identity_elem,
    inverse,
    lamp_embed,
    multiply,
    parse_element,
    role_models,
    t_power,
)
from .engine import (
    SearchLimits,
    SearchOutcome,
    complete_search,
    invariant_search,
    outcome_to_json,
    tail_invariance_audit,
)
from .groups import FiniteGroupTable, GroupSpecError, cyclic_table, parse_group_spec, product_table
from .patterns import (
    PartialConfig,
    Pattern,
    SftSpec,
    Verdict,
    config_from_json,
    config_to_json,
    is_admissible,
    spec_to_json,
    violates_at,
)
from .render import render_dot
from .subshift import (
    allowed_patterns,
    conformist_spec,
    forbidden_patterns,
    horizontal_coord,
    role_model_coords,
    sample_sigma0,
    sigma0,
)
from .verify import VerifyReport, run_verification
from .words import digit_one_parity, majority_bit, substitution_image, substitution_iterates

__version__ = "0.1.0"

__all__ = [
    "BallSizeError",
    "ContradictionCertificate",
    "DescriptorError",
    "Elem",
    "ElementSyntaxError",
    "FiniteGroupTable",
    "GroupSpecError",
    "LampDecomposition",
    "PartialConfig",
    "Pattern",
    "SearchLimits",
    "SearchOutcome",
    "SftSpec",
    "SubgroupDescriptor",
    "Verdict",
    "VerifyReport",
    "allowed_patterns",
    "ball",
    "certificate_to_json",
    "certify",
    "check_certificate",
    "complete_search",
    "config_from_json",
    "config_to_json",
    "conformist_spec",
    "cyclic_table",
    "decompose",
    "digit_one_parity",
    "forbidden_patterns",
    "format_element",
    "generating_set",
    "horizontal_coord",
    "identity_elem",
    "inverse",
    "invariant_search",
    "is_admissible",
    "lamp_embed",
    "majority_bit",
    "make_sum_kernel",
    "multiply",
    "outcome_to_json",
    "parse_element",
    "parse_group_spec",
    "product_table",
    "render_dot",
    "role_model_coords",
    "role_models",
    "run_verification",
    "sample_sigma0",
    "sigma0",
    "spec_to_json",
    "substitution_image",
    "substitution_iterates",
    "t_power",
    "tail_invariance_audit",
    "transfer_generators",
    "violates_at",
]
