//! Exact arithmetic in `O_K / pi^m` for `K = Q_p`, unramified extensions,
//! and Eisenstein (totally ramified) extensions.

mod field;
mod poly;
mod ring;
mod units;

pub use field::{make_field, FieldKind, LocalFieldSpec};
pub use poly::{is_prime, IntPoly};
pub use ring::{ResidueRing, RingElement};
pub use units::{unit_group, unit_group_with, UnitGroupInfo};
