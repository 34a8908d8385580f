#![no_std]

extern crate alloc;

pub mod algebra;
pub mod bch;
pub mod coherent;
pub mod expm;
pub mod error;
pub mod fock;
pub mod lanczos;
pub mod spectral;

pub use error::{Error, Result};
