pub mod algebra;
pub mod frontend;
pub mod pade;
pub mod phi4corpus;
pub mod residual;
pub mod series;
