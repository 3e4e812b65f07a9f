//! Published footprint tables for the Qwen3 family, and the tolerances the
//! acceptance suite checks them against.
//!
//! All values are in GiB as printed (two decimals), except per-token KV,
//! which is in KiB.

pub const MODELS: [&str; 6] = [
    "Qwen3-0.6B",
    "Qwen3-1.7B",
    "Qwen3-4B",
    "Qwen3-8B",
    "Qwen3-14B",
    "Qwen3-32B",
];

/// Weight footprint at 4, 8 and 16 bits.
pub const WEIGHTS_GIB: [[&str; 3]; 6] = [
    ["0.50", "0.71", "1.40"],
    ["1.26", "1.93", "3.78"],
    ["2.49", "4.19", "7.49"],
    ["5.68", "8.94", "15.26"],
    ["9.30", "15.50", "27.51"],
    ["18.01", "32.66", "61.02"],
];

pub const WEIGHT_BITS: [u32; 3] = [4, 8, 16];

/// Full-precision KV cache at the `(tokens, group size)` columns below.
pub const KV_GIB: [[&str; 4]; 6] = [
    ["0.21", "1.92", "3.20", "51.27"],
    ["0.21", "1.92", "3.20", "51.27"],
    ["0.27", "2.47", "4.12", "65.91"],
    ["0.27", "2.47", "4.12", "65.91"],
    ["0.31", "2.75", "4.58", "73.24"],
    ["0.49", "4.39", "7.32", "117.19"],
];

pub const KV_COLUMNS: [(u64, u32); 4] = [(2_000, 1), (18_000, 1), (30_000, 1), (30_000, 16)];

pub const KV_KIB_PER_TOKEN: [u64; 6] = [112, 112, 144, 144, 160, 256];

/// Relative tolerance on quantized weight cells.
pub const WEIGHT_TOL_QUANTIZED: f64 = 0.03;
/// Relative tolerance on 16-bit weight cells.
pub const WEIGHT_TOL_NATIVE: f64 = 0.005;
/// Absolute tolerance between Monte Carlo and exact maj@G.
pub const MAJ_MC_TOL: f64 = 0.01;
pub const MAJ_MC_RESAMPLES: u64 = 100_000;
pub const MAJ_MC_SEED: u64 = 0x5eed;
/// KV/weights ratio the 4B 4-bit, 30k-token decomposition must exceed.
pub const DECOMPOSITION_MIN_RATIO: f64 = 1.6;
pub const KV_TABLE_MAX_SECONDS: f64 = 1.0;
pub const PARETO_MAX_SECONDS: f64 = 5.0;
pub const PARETO_INSTANCES: usize = 100;
pub const PARETO_POINTS: usize = 1_000;

pub fn parse_gib(cell: &str) -> f64 {
    cell.parse().expect("reference cells are decimal numbers")
}
