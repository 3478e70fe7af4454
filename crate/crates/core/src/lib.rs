//! Exact corner polyhedra for pure and mixed integer group relaxations,
//! with checks for one-dimensional cut-generating functions and lifting.

pub mod error;
pub mod examples;
pub mod exactlp;
pub mod gjfun;
pub mod hull;
pub mod io;
pub mod lift;
pub mod linalg;
pub mod model;
pub mod numctx;
pub mod par;
pub mod rational;
pub mod selftest;

pub use error::{Error, Result};
pub use rational::Q;
