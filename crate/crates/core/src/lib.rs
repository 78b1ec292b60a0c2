pub mod graphic;
pub mod linalg;
pub mod matroid;
pub mod measure;
mod parallel;
pub mod representable;
pub mod spectral;
pub mod cli;
pub mod io;
