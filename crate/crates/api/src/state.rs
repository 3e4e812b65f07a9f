use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use memplan_core::measurements::{load_measurements, load_pools, SamplePool};
use memplan_core::{Dataset, ModelCatalog};

use crate::error::ApiError;

/// Everything the service answers from. Loaded once, never mutated.
#[derive(Debug, Clone, Default)]
pub struct AppState {
    pub catalog: ModelCatalog,
    pub dataset: Dataset,
    pub pool_sets: BTreeMap<String, Vec<SamplePool>>,
}

fn io(path: &Path, e: impl std::fmt::Display) -> ApiError {
    ApiError::new("IO_ERROR", format!("{}: {e}", path.display()))
}

impl AppState {
    pub fn new(catalog: ModelCatalog, dataset: Dataset) -> Self {
        AppState {
            catalog,
            dataset,
            pool_sets: BTreeMap::new(),
        }
    }

    pub fn with_pool_set(mut self, name: impl Into<String>, pools: Vec<SamplePool>) -> Self {
        self.pool_sets.insert(name.into(), pools);
        self
    }

    /// Builtin catalog unless `spec` is given; empty dataset unless
    /// `dataset` is given. Pool sets are `(name, path)` pairs.
    pub fn load(
        spec: Option<&Path>,
        dataset: Option<&Path>,
        pool_sets: &[(String, PathBuf)],
    ) -> Result<Self, ApiError> {
        let catalog = match spec {
            Some(p) => ModelCatalog::from_path(p)?,
            None => ModelCatalog::builtin(),
        };
        let dataset = match dataset {
            Some(p) => load_measurements(BufReader::new(File::open(p).map_err(|e| io(p, e))?))
                .map_err(|e| ApiError::new(e.code(), format!("{}: {e}", p.display())))?,
            None => Dataset::default(),
        };
        let mut state = AppState::new(catalog, dataset);
        for (name, p) in pool_sets {
            let pools = load_pools(BufReader::new(File::open(p).map_err(|e| io(p, e))?))
                .map_err(|e| ApiError::new(e.code(), format!("{}: {e}", p.display())))?;
            state.pool_sets.insert(name.clone(), pools);
        }
        Ok(state)
    }
}
