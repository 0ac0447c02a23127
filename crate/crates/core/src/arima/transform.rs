//! Bijection between unconstrained optimizer coordinates and the
//! stationary/invertible coefficient region, through partial
//! autocorrelations (the Monahan recursion).

use crate::error::{Error, Result};

// Partial autocorrelations are kept strictly inside the unit interval so
// fitted polynomials keep their roots strictly outside the unit circle.
const PAC_LIMIT: f64 = 1.0 - 1e-6;

/// Maps unconstrained reals to AR coefficients of a stationary polynomial
/// 1 − φ₁z − … − φ_p z^p.
pub fn to_stationary(raw: &[f64]) -> Vec<f64> {
    let p = raw.len();
    let mut coeffs: Vec<f64> = raw.iter().map(|r| PAC_LIMIT * r.tanh()).collect();
    for j in 1..p {
        let a = coeffs[j];
        let prefix: Vec<f64> = (0..j).map(|k| coeffs[k] - a * coeffs[j - 1 - k]).collect();
        coeffs[..j].copy_from_slice(&prefix);
    }
    coeffs
}

/// Inverse of [`to_stationary`]; fails when `phi` lies outside the
/// stationary region.
pub fn from_stationary(phi: &[f64]) -> Result<Vec<f64>> {
    let partials = partial_autocorrelations(phi)?;
    partials
        .iter()
        .map(|&pac| {
            let scaled = pac / PAC_LIMIT;
            if scaled.abs() >= 1.0 {
                Err(Error::NumericalDegeneracy(format!(
                    "partial autocorrelation {pac} outside the representable range"
                )))
            } else {
                Ok(scaled.atanh())
            }
        })
        .collect()
}

/// Durbin–Levinson downdating: recovers the partial autocorrelations of an
/// AR coefficient vector, erroring when any leaves (−1, 1).
fn partial_autocorrelations(phi: &[f64]) -> Result<Vec<f64>> {
    let p = phi.len();
    let mut cur = phi.to_vec();
    let mut partials = vec![0.0; p];
    for j in (1..p).rev() {
        let a = cur[j];
        if a.abs() >= 1.0 {
            return Err(Error::NumericalDegeneracy(format!(
                "coefficient vector is non-stationary (pac {a} at order {})",
                j + 1
            )));
        }
        partials[j] = a;
        let denom = 1.0 - a * a;
        let prefix: Vec<f64> = (0..j)
            .map(|k| (cur[k] + a * cur[j - 1 - k]) / denom)
            .collect();
        cur[..j].copy_from_slice(&prefix);
    }
    if p > 0 {
        if cur[0].abs() >= 1.0 {
            return Err(Error::NumericalDegeneracy(format!(
                "coefficient vector is non-stationary (pac {} at order 1)",
                cur[0]
            )));
        }
        partials[0] = cur[0];
    }
    Ok(partials)
}

/// True when 1 − φ₁z − … − φ_p z^p has all roots strictly outside the unit
/// circle.
pub fn is_stationary(phi: &[f64]) -> bool {
    partial_autocorrelations(phi).is_ok()
}

/// True when 1 + θ₁z + … + θ_q z^q has all roots strictly outside the unit
/// circle; equivalent to stationarity of the negated coefficient vector.
pub fn is_invertible(theta: &[f64]) -> bool {
    let negated: Vec<f64> = theta.iter().map(|t| -t).collect();
    is_stationary(&negated)
}

/// Maps unconstrained reals to MA coefficients of an invertible polynomial
/// 1 + θ₁z + … + θ_q z^q.
pub fn to_invertible(raw: &[f64]) -> Vec<f64> {
    to_stationary(raw).iter().map(|a| -a).collect()
}

/// Inverse of [`to_invertible`].
pub fn from_invertible(theta: &[f64]) -> Result<Vec<f64>> {
    let negated: Vec<f64> = theta.iter().map(|t| -t).collect();
    from_stationary(&negated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_one_is_scaled_tanh() {
        let phi = to_stationary(&[0.5]);
        assert!((phi[0] - PAC_LIMIT * 0.5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn ar2_region_examples() {
        assert!(is_stationary(&[0.5, 0.3]));
        assert!(is_stationary(&[-1.5, -0.6]));
        assert!(!is_stationary(&[1.5, 0.6]));
        assert!(!is_stationary(&[0.0, 1.2]));
    }

    #[test]
    fn invertibility_mirrors_stationarity() {
        assert!(is_invertible(&[1.5, 0.6]));
        assert!(!is_invertible(&[-1.5, -0.6]));
        assert!(is_invertible(&[0.4]));
        assert!(!is_invertible(&[1.1]));
    }

    #[test]
    fn output_always_stationary() {
        let raws = [
            vec![2.0, -3.0, 0.7],
            vec![-5.0, 5.0],
            vec![0.1, 0.2, 0.3, 0.4, 0.5],
        ];
        for raw in &raws {
            assert!(is_stationary(&to_stationary(raw)));
            assert!(is_invertible(&to_invertible(raw)));
        }
    }

    #[test]
    fn round_trip_survives_saturated_coordinates() {
        // Deep in the tanh tails the map loses precision; it must still come
        // back within the curvature-limited accuracy.
        let raw = vec![2.95, 2.77, 2.52, -2.49];
        let back = from_stationary(&to_stationary(&raw)).expect("inside the region");
        for (a, b) in raw.iter().zip(&back) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn round_trip_identity(
            raw in proptest::collection::vec(-2.0f64..2.0, 1..7),
        ) {
            let phi = to_stationary(&raw);
            let back = from_stationary(&phi).expect("inside the region");
            for (a, b) in raw.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-9, "raw {a} vs back {b}");
            }
            let theta = to_invertible(&raw);
            let back = from_invertible(&theta).expect("inside the region");
            for (a, b) in raw.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
