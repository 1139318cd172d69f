"""Exact computations for Lie algebras of order three.

Submodules:

* :mod:`.scalars` - the field Q(q), q a primitive cube root of unity
* :mod:`.roby` - the three-exterior (Roby) algebra and its rise-free basis
* :mod:`.lie3` - Lie algebras of order three, built-in examples, axiom checks
* :mod:`.enveloping` - enveloping algebra in PBW form, Hopf structure, dual products
* :mod:`.matrices` - block-graded matrices over the Roby algebra
* :mod:`.cli` - JSON command-line front end
"""

from .errors import CapExceededError, NotInvertibleError, ParseError, PreconditionError, TernaryError
from .scalars import ONE, Q, ZERO, Cyclotomic3, Rational, qpow
from .roby import RobyElement, enumerate_basis, lam_mul, nilpotency_order, reduce, roby_dim
from .lie3 import LieOrder3Algebra, MatrixRep, build_gl, build_gl_el, build_poincare_cubic, check_axioms, check_representation
from .enveloping import EnvelopingAlgebra, UElement, coproduct, derive_theta_relations, dual_multiply
from .matrices import GradedMatrix, LambdaMatrix, group_element, invert_block, invert_lambda0, is_glf_member

__version__ = "0.1.0"
