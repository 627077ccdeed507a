//! Exact decision procedure for bilinear forms whose isometries all have
//! determinant 1, over `Q` and odd prime fields.

pub mod blocks;
pub mod decide;
pub mod exactmat;
pub mod oracle;
pub mod regularize;

pub use exactmat::{det_poly, ExactError, Field, Matrix, Poly, Scalar};
pub use regularize::{regularize, verify_congruence, RegularizationResult};
pub use decide::{decide, decide_gamma_shift, DecideError, Method, Verdict, XiReport};
