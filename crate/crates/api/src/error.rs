use serde::Serialize;
use serde_json::Value;

use memplan_core::{FrontierError, MeasurementError, MemoryError, PlanError};

/// Version of every request and response document.
pub const API_SCHEMA_VERSION: u32 = 1;

/// A failed request: stable machine code, human message, optional payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ApiError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            detail: None,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new("INVALID_REQUEST", message)
    }

    /// HTTP status for this error's code.
    pub fn status(&self) -> u16 {
        match self.code {
            "MODEL_NOT_FOUND" | "CONFIG_NOT_FOUND" | "POOL_SET_NOT_FOUND" | "NOT_FOUND" => 404,
            "INFEASIBLE" | "NO_CANDIDATES" | "EMPTY_FRONTIER" => 422,
            "IO_ERROR" | "SPEC_FILE_INVALID" => 500,
            _ => 400,
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<MemoryError> for ApiError {
    fn from(e: MemoryError) -> Self {
        ApiError::new(e.code(), e.to_string())
    }
}

impl From<MeasurementError> for ApiError {
    fn from(e: MeasurementError) -> Self {
        ApiError::new(e.code(), e.to_string())
    }
}

impl From<FrontierError> for ApiError {
    fn from(e: FrontierError) -> Self {
        ApiError::new(e.code(), e.to_string())
    }
}

impl From<PlanError> for ApiError {
    fn from(e: PlanError) -> Self {
        let mut err = ApiError::new(e.code(), e.to_string());
        if let PlanError::Infeasible {
            budget,
            cheapest_cost,
            cheapest,
        } = &e
        {
            err.detail = Some(serde_json::json!({
                "budget": budget,
                "cheapest_cost": cheapest_cost,
                "cheapest": cheapest,
            }));
        }
        err
    }
}

/// `{schema_version, ok, result}` or `{schema_version, ok, error}`.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ApiError>,
}

impl<T: Serialize> Envelope<T> {
    pub fn from_result(r: Result<T, ApiError>) -> Self {
        match r {
            Ok(v) => Envelope {
                schema_version: API_SCHEMA_VERSION,
                ok: true,
                result: Some(v),
                error: None,
            },
            Err(e) => Envelope {
                schema_version: API_SCHEMA_VERSION,
                ok: false,
                result: None,
                error: Some(e),
            },
        }
    }

    /// Compact JSON; the exact bytes the service and the CLI emit.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(ApiError::new("MODEL_NOT_FOUND", "").status(), 404);
        assert_eq!(ApiError::new("INFEASIBLE", "").status(), 422);
        assert_eq!(ApiError::new("IO_ERROR", "").status(), 500);
        assert_eq!(ApiError::invalid("").status(), 400);
        assert_eq!(ApiError::new("INVALID_GROUP", "").status(), 400);
    }

    #[test]
    fn envelope_shape() {
        let ok = Envelope::from_result(Ok(3)).to_json();
        assert_eq!(ok, r#"{"schema_version":1,"ok":true,"result":3}"#);
        let err = Envelope::<u8>::from_result(Err(ApiError::invalid("bad"))).to_json();
        assert_eq!(err, r#"{"schema_version":1,"ok":false,"error":{"code":"INVALID_REQUEST","message":"bad"}}"#);
    }
}
