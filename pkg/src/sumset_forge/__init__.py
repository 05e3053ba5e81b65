"""sumset-forge: exact sumset/product-set growth verification over finite fields.

Builds deterministic models of GF(p^k), computes sumsets, product sets,
dilates and ratio sets exactly, verifies the classical growth inequalities
(Ruzsa triangle, iterated-growth corollaries, dilate bounds) on concrete
instances with exact rational arithmetic, runs the three-case growth argument
end to end emitting machine-checkable certificates, and searches small fields
for extremal sets.
"""

from .ffield import (FieldCtx, FieldError, SubfieldDesc, affine_images, arith,
                     field_from_spec, make_field, parse_field_spec, subfields)
from .garaev import (CaseCertificate, PigeonholeOutcome, check_hypothesis,
                     classify_ratio_set, pigeonhole, run_main_theorem,
                     verify_certificate)
from .lemmas import (IneqReport, check_cor_dilates, check_cor_products,
                     check_plunneke_corollary, check_ruzsa_triangle,
                     is_subfield, lemma11_witness, lemma13_affine_witness,
                     plunneke_witness_small)
from .setalg import (ESet, collision_energy, diffset, dilate,
                     dilate_intersection_count, mult_energy, parse_eset,
                     productset, quotientset, ratio_of_differences, sumset,
                     translate)

__version__ = "0.1.0"

__all__ = [
    "FieldCtx", "FieldError", "SubfieldDesc", "ESet",
    "make_field", "field_from_spec", "parse_field_spec", "arith",
    "subfields", "affine_images", "parse_eset",
    "sumset", "diffset", "productset", "quotientset",
    "dilate", "translate", "ratio_of_differences",
    "dilate_intersection_count", "collision_energy", "mult_energy",
    "IneqReport", "check_ruzsa_triangle", "check_plunneke_corollary",
    "check_cor_dilates", "check_cor_products", "plunneke_witness_small",
    "lemma11_witness", "lemma13_affine_witness", "is_subfield",
    "PigeonholeOutcome", "CaseCertificate", "pigeonhole", "check_hypothesis",
    "classify_ratio_set", "run_main_theorem", "verify_certificate",
    "__version__",
]
