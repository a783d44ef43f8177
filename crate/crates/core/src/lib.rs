pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod lift3d;
pub mod lrep;
pub mod recognition;
pub mod rational;
pub mod report;
pub mod schnyder;
pub mod sl;
