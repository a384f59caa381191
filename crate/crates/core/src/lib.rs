pub mod affine;
pub mod desing;
pub mod error;
pub mod exactlin;
pub mod framed;
pub mod loopmod;
pub mod orbitgeom;
pub mod partitions;
pub mod pluecker;
pub mod verify;
pub mod wedge;

pub use error::{Error, Result};
