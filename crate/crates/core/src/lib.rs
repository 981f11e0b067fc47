//! Covert-rate optimization for IRS-aided links watched by an energy-detecting warden.

mod beam;
pub mod channel;
pub mod config;
pub mod detection;
pub mod error;
pub mod linalg;
pub mod multi_antenna;
pub mod robust;
pub mod sim;
mod polish;
pub mod sdp;
pub mod single_antenna;
pub mod solution;

pub use error::{Error, Result};
