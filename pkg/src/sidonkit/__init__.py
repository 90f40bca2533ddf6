"""Sidon systems of k-sets: sumsets, verification, constructions and oracles."""

from .setcore import (
    KSet,
    NormalForm,
    SumsetKey,
    dilate,
    dual_3set,
    h_fold_sumset,
    lex_compare,
    normalize,
    sumset,
)
from .verifier import (
    CapExceeded,
    CollisionRecord,
    Family,
    find_collisions,
    is_bhg,
    is_sidon,
    representation_count,
    translate_classes,
    upper_bound_fk,
)

__version__ = "0.1.0"
