pub mod check;
pub mod classify;
pub mod linalg;
pub mod matrix;
pub mod reduction;
pub mod rep;
pub mod rmatrix;
pub mod scalars;
pub mod sixj;
pub mod verify;
