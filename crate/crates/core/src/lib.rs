pub mod cone;
pub mod error;
pub mod experiments;
pub mod families;
pub mod fiber;
pub mod graph;
pub mod k33;
pub mod latin;
pub mod presets;
pub mod tensor;

pub use error::{Error, Result};
