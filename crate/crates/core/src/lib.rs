//! Low-cost privacy-preserving acoustic features, environmental degradation,
//! and a privacy/utility evaluation suite.

pub mod audio;
pub mod augment;
pub mod metrics;
pub mod seeding;
pub mod transforms;
