#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod apls;
pub mod error;
pub mod extract;
pub mod geom;
pub mod harness;
pub mod io;
pub mod network;
pub mod raster;
pub mod render;
pub mod speed;

pub use error::{Error, Result};
