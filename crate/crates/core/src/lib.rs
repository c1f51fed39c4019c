//! Certified lower bounds for the Garsia entropy of Bernoulli convolutions
//! with algebraic parameters.
//!
//! The pipeline: parse the minimal polynomial of `beta1`, find its roots,
//! choose the expanding conjugates, build word boxes in the product of the
//! conjugate coordinates, and count the maximal overlap `m_n`. Then
//! `L_n = n log 2 - log m_n` is a lower bound for `n H(beta1)`, and
//! `L_n / (n log beta1) > 1` proves the Bernoulli convolution has
//! dimension one.

pub mod conjugates;
pub mod criteria;
pub mod depth;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod interval;
pub mod oracle;
pub mod poly;
pub mod roots;
pub mod word;

pub use error::{Error, Result};
