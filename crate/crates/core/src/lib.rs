pub mod clibench;
pub mod config;
pub mod diffdisc;
pub mod error;
pub mod ffield;
pub mod montes;
pub mod newton;
pub mod omtype;
pub mod oracle;
pub mod polyz;
pub mod presultant;
pub mod sfl;

pub use error::{Error, Result};
