//! Exact quantum cohomology and genus-one Gromov-Witten computations for the
//! local simple P^r flop X = P(O(-1)^{r+1} + O) over P^r.

pub mod algebra;
pub mod batyrev;
pub mod coh_ring;
pub mod error;
pub mod flop;
pub mod verify;
pub mod givental;
pub mod weyl;

pub use error::{Error, Result};
