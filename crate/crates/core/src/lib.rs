pub mod beta_family;
pub mod bsn;
pub mod error;
pub mod handle;
pub mod ks;
pub mod order_stats;
pub mod quadrature;
pub mod rng;
pub mod skew_family;
pub mod sn;
pub mod special;
pub mod table1;
pub mod verify;
