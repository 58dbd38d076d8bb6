//! Tensor hierarchies of Lie-Leibniz triples, computed over exact rationals.
//!
//! The pipeline runs [`triple`] → [`freegla`] → [`hierarchy`] →
//! [`differential`] → [`dgla`], with [`functor`] acting on morphisms of
//! stringent triples.

pub mod catalog;
pub mod dgla;
pub mod differential;
pub mod exactla;
pub mod freegla;
pub mod functor;
pub mod hierarchy;
pub mod io;
pub mod report;
pub mod triple;
