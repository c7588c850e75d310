pub mod engagement;
pub mod error;
pub mod geom2d;
pub mod io;
pub mod ipw;
pub mod oracle;
pub mod pipeline;
pub mod sweep;
