use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Two-parameter Bretschneider spectral density, m^2 s / rad.
///
/// `S(w) = 5/16 Hs^2 wp^4 / w^5 exp(-5/4 (wp / w)^4)` with `wp = 2 pi / Tp`.
pub fn bretschneider_spectrum(hs: f64, tp: f64, omega: f64) -> Result<f64> {
    for (name, v) in [("Hs", hs), ("Tp", tp), ("omega", omega)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let wp = 2.0 * PI / tp;
    let ratio4 = (wp / omega).powi(4);
    Ok(5.0 / 16.0 * hs * hs * ratio4 / omega * (-1.25 * ratio4).exp())
}
