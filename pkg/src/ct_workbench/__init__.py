"""Exact constant term workbench: q-polynomials, Laurent products,
tournaments, closed forms and a brute-force verifier."""

from .identities import IdentityInstance, InvalidInstance, PoleError, Theorem, rhs
from .laurent import (
    LaurentPoly,
    Monomial,
    Pochhammer,
    ProductSpec,
    andrews_spec,
    build_product,
    ct_all,
    ct_product,
    dn_product,
    dn_spec,
    dyson_product_classical,
)
from .qring import QPoly, QRat, qbinom, qfac, qmultinomial
from .tournament import QSet, Tournament, e_bar, r1_family, r2_family
from .verify import SweepSpec, VerificationReport, sweep, verify_instance

__version__ = "0.1.0"

__all__ = [
    "IdentityInstance", "InvalidInstance", "PoleError", "Theorem", "rhs",
    "LaurentPoly", "Monomial", "Pochhammer", "ProductSpec", "andrews_spec", "build_product",
    "ct_all", "ct_product", "dn_product", "dn_spec", "dyson_product_classical",
    "QPoly", "QRat", "qbinom", "qfac", "qmultinomial",
    "QSet", "Tournament", "e_bar", "r1_family", "r2_family",
    "SweepSpec", "VerificationReport", "sweep", "verify_instance",
]
