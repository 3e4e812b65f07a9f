use serde::{Deserialize, Serialize};

use super::FrontierError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    /// The query fell outside the measured grid and took the nearest endpoint.
    Clamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interpolated<S> {
    pub accuracy: S,
    pub extrapolated: Option<Extrapolation>,
}

impl<S> Interpolated<S> {
    pub fn is_clamped(&self) -> bool {
        self.extrapolated.is_some()
    }
}

/// Piecewise-linear accuracy at `token_budget` along one configuration
/// family's measured `(token_budget, accuracy)` curve.
pub fn interpolate_accuracy<S: Scalar>(
    curve: &[(u64, S)],
    token_budget: u64,
) -> Result<Interpolated<S>, FrontierError> {
    let (first, last) = match (curve.first(), curve.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(FrontierError::Empty),
    };
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(FrontierError::UnsortedCurve);
    }
    let clamped = |accuracy| Interpolated {
        accuracy,
        extrapolated: Some(Extrapolation::Clamped),
    };
    if token_budget < first.0 {
        return Ok(clamped(first.1));
    }
    if token_budget > last.0 {
        return Ok(clamped(last.1));
    }
    // First grid point at or above the query.
    let hi = curve.partition_point(|&(t, _)| t < token_budget);
    let (t1, a1) = curve[hi];
    let accuracy = if t1 == token_budget {
        a1
    } else {
        let (t0, a0) = curve[hi - 1];
        let frac = S::of((token_budget - t0) as f64 / (t1 - t0) as f64);
        a0 + (a1 - a0) * frac
    };
    Ok(Interpolated {
        accuracy,
        extrapolated: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_exact() {
        let curve = [(2_000, 0.2), (6_000, 0.4), (10_000, 0.35)];
        for &(t, a) in &curve {
            let r = interpolate_accuracy(&curve, t).unwrap();
            assert_eq!(r.accuracy, a);
            assert!(!r.is_clamped());
        }
    }

    #[test]
    fn midpoint() {
        let r = interpolate_accuracy(&[(2_000, 0.2), (6_000, 0.4)], 4_000).unwrap();
        assert!((r.accuracy - 0.3f64).abs() < 1e-15);
        let r32 = interpolate_accuracy(&[(2_000, 0.2f32), (6_000, 0.4)], 4_000).unwrap();
        assert!((r32.accuracy - 0.3f32).abs() < 1e-6);
    }

    #[test]
    fn clamps_outside_grid() {
        let curve = [(2_000, 0.2), (6_000, 0.4)];
        let below = interpolate_accuracy(&curve, 100).unwrap();
        assert_eq!((below.accuracy, below.extrapolated), (0.2, Some(Extrapolation::Clamped)));
        let above = interpolate_accuracy(&curve, 30_000).unwrap();
        assert_eq!(above.accuracy, 0.4);
        assert!(above.is_clamped());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            interpolate_accuracy::<f64>(&[], 5),
            Err(FrontierError::Empty)
        ));
        assert!(matches!(
            interpolate_accuracy(&[(5, 0.1), (5, 0.2)], 5),
            Err(FrontierError::UnsortedCurve)
        ));
    }
}
