"""Rings of functions E -> D, their spectra and the finite constructions behind them."""

from .algebra import ExtField, Integers, IntegersMod, Poly, Poly2, PrimeField, RingElem, irreducible_poly
from .constructions import (
    CombinerForm,
    binary_combiner_normform,
    combine_finitecase,
    combine_notalgcl,
    dichotomy_witness,
    interpolation_combiner,
    unit_one_lift,
    unit_one_polynomial,
)
from .errors import CheckFailed, FuncSpecError, InputError
from .funcring import FnValue, FuncRing, IdealDescriptor, MDescriptor, image_ring, preimage
from .intpoly import IVPoly, Membership, PadicApprox, chabert_member, divide_by_constant, required_precision
from .normform import NForm, determinant_form, norm_form
from .setfilters import FilterFin, SetFamily, UltrafilterFin, fip_filter, refinements
from .spectrum import classify_dichotomy, enumerate_ideals, ultraproduct_principal, verify_finitethm

__all__ = [
    "CheckFailed", "CombinerForm", "ExtField", "FilterFin", "FnValue", "FuncRing", "FuncSpecError",
    "IVPoly", "IdealDescriptor", "InputError", "Integers", "IntegersMod", "MDescriptor", "Membership",
    "NForm", "PadicApprox", "Poly", "Poly2", "PrimeField", "RingElem", "SetFamily", "UltrafilterFin",
    "binary_combiner_normform", "chabert_member", "classify_dichotomy", "combine_finitecase",
    "combine_notalgcl", "determinant_form", "dichotomy_witness", "divide_by_constant",
    "enumerate_ideals", "fip_filter", "image_ring", "interpolation_combiner", "irreducible_poly",
    "norm_form", "preimage", "refinements", "required_precision", "ultraproduct_principal",
    "unit_one_lift", "unit_one_polynomial", "verify_finitethm",
]
