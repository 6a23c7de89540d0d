pub mod cyclotomic;
pub mod fracseries;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use cyclotomic::{cyc_power_sum, elementary_symmetric_omitting, CycNumber};
pub use fracseries::FracSeries;
pub use laurent::{EquivScalar, LaurentRat};
pub use poly::Poly;
pub use ratfunc::{IntegrationMode, RatFunc};
pub use rational::Rational;
