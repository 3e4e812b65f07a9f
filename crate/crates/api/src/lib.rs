//! HTTP service over the memory model, frontier, planner and estimator.
//!
//! Every response is an [`Envelope`]: `{"schema_version":1,"ok":true,"result":..}`
//! or `{"schema_version":1,"ok":false,"error":{"code":..,"message":..}}`.
//! Data is loaded at startup and read-only afterwards.

pub mod docs;
mod error;
pub mod handlers;
mod server;
mod state;

pub use error::{ApiError, Envelope, API_SCHEMA_VERSION};
pub use server::{router, serve};
pub use state::AppState;
