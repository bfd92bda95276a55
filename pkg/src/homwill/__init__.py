"""Homogeneous Willmore surfaces in spheres via twisted loop algebras.

Submodules:

``linalg``    forms, Lie algebra membership, exponentials, weights
``loops``     Laurent polynomials with reality and twist conditions
``so3``       real so(3) representations and the Moebius action
``frames``    extended frames, orbit monodromy, lightcone projection
``geometry``  curvature, Willmore energy and symmetry of sampled surfaces
``wu``        normalized potentials and the block structure of monodromy data
``solvable``  the solvable subalgebra of so(1, p)
``cli``       command-line interface
"""

from .exceptions import (
    CoverageError,
    DecompositionError,
    DegenerateProjectionError,
    FormMismatchError,
    HomwillError,
    ImmersionError,
    LatticeRoundingError,
    MembershipError,
    NonCommutingPotentialError,
    RealityError,
    WillmoreConditionError,
)
from .frames import (
    ConstantPotential,
    HomogeneousSphereData,
    frame_plane,
    frame_sphere,
    frame_sphere_polar,
    homogeneity_residual,
    lightcone_project,
    orbit_monodromy,
    torus_potential,
    veronese_monodromy,
)
from .geometry import SurfaceGrid, antipodal_check, measure, veronese, veronese_atlas
from .linalg import BilinearForm, LieMatrix, commutator, expm, skew_eigenstructure
from .loops import LaurentLoop, bracket, degree_window_check, evaluate
from .so3 import So3Triple, build_irreducible, decompose, direct_sum, is_irreducible_ambient, mobius_act
from .solvable import SolvableAlgebra, build_solvable, halfplane_bracket_check, verify_structure
from .wu import (
    BlockData,
    CoefficientSplit,
    NormalizedPotential,
    canonicalize_A3,
    check_comm_lemma,
    eval_xi,
    extract_blocks,
    hol_mc,
    isotropy_residual,
    lorentz_normalize,
    minimality_certificate,
    normalize_monodromy,
    split_and_potential,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearForm",
    "BlockData",
    "CoefficientSplit",
    "ConstantPotential",
    "CoverageError",
    "DecompositionError",
    "DegenerateProjectionError",
    "FormMismatchError",
    "HomogeneousSphereData",
    "HomwillError",
    "ImmersionError",
    "LatticeRoundingError",
    "LaurentLoop",
    "LieMatrix",
    "MembershipError",
    "NonCommutingPotentialError",
    "NormalizedPotential",
    "RealityError",
    "So3Triple",
    "SolvableAlgebra",
    "SurfaceGrid",
    "WillmoreConditionError",
    "antipodal_check",
    "bracket",
    "build_irreducible",
    "build_solvable",
    "canonicalize_A3",
    "check_comm_lemma",
    "commutator",
    "decompose",
    "degree_window_check",
    "direct_sum",
    "eval_xi",
    "evaluate",
    "expm",
    "extract_blocks",
    "frame_plane",
    "frame_sphere",
    "frame_sphere_polar",
    "halfplane_bracket_check",
    "hol_mc",
    "homogeneity_residual",
    "is_irreducible_ambient",
    "isotropy_residual",
    "lightcone_project",
    "lorentz_normalize",
    "measure",
    "minimality_certificate",
    "normalize_monodromy",
    "mobius_act",
    "orbit_monodromy",
    "skew_eigenstructure",
    "split_and_potential",
    "torus_potential",
    "verify_structure",
    "veronese",
    "veronese_atlas",
    "veronese_monodromy",
]
