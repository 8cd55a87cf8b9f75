//! The spinor side: Clifford action on `/\ W`, pure spinors and the spin
//! coordinates of isotropic planes, all over the rationals.

pub mod clifford;
pub mod grassmann;
pub mod linalg;

pub use clifford::{bilinear_form_b, clifford_act, projection_pi, ProjectionError, Spinor, Vector2n, MAX_SPIN_N};
pub use grassmann::{
    annihilator, complete_isotropic_pair, mask_key, parse_mask_key, pure_spinor, purity_check, random_isotropic,
    random_unit_vector, sign_twist, spin_coordinates, verify_cube_recurrence, verify_trbi, IsotropicSubspace,
    RelationFailure, RelationReport, SpinPoint, SpinorError,
};
pub use linalg::{det, pfaffian, NotSkew};
