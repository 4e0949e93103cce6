//! Hydrodynamic interaction kernels.
//!
//! [`HydroKernel`] is the seam between the optimizers and the hydrodynamics:
//! anything that can produce added mass, radiation damping and excitation
//! forces for a layout can be plugged in. [`PointAbsorberKernel`] is the
//! built-in closed-form model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::params::{WecParameters, GRAVITY, WATER_DENSITY};
use crate::error::{Error, Result};
use crate::geometry::Layout;
use crate::Complex64;

/// Deep-water wavenumber `k = omega^2 / g`.
pub fn dispersion_wavenumber(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("angular frequency must be positive, got {omega}")));
    }
    Ok(omega * omega / GRAVITY)
}

/// Added mass and radiation damping of a layout at one frequency.
#[derive(Debug, Clone)]
pub struct RadiationCoefficients {
    pub omega: f64,
    pub added_mass: DMatrix<f64>,
    pub radiation_damping: DMatrix<f64>,
}

/// Hydrodynamic coefficients for one regular wave `(omega, beta)`.
#[derive(Debug, Clone)]
pub struct HydroCoefficients {
    pub omega: f64,
    pub beta: f64,
    pub added_mass: DMatrix<f64>,
    pub radiation_damping: DMatrix<f64>,
    pub excitation: DVector<Complex64>,
}

impl HydroCoefficients {
    pub fn dof(&self) -> usize {
        self.excitation.len()
    }
}

/// Source of the `3N x 3N` radiation matrices and the `3N` excitation vector.
///
/// Degrees of freedom are ordered `(surge, sway, heave)` per buoy, buoys in
/// layout order. Radiation terms depend on frequency only, so the spectral
/// integration asks for them once per frequency and reuses them for every
/// wave direction.
pub trait HydroKernel: Send + Sync {
    fn radiation(&self, layout: &Layout, params: &WecParameters, omega: f64) -> Result<RadiationCoefficients>;

    fn excitation(&self, layout: &Layout, params: &WecParameters, omega: f64, beta: f64) -> Result<DVector<Complex64>>;

    fn coefficients(
        &self,
        layout: &Layout,
        params: &WecParameters,
        omega: f64,
        beta: f64,
    ) -> Result<HydroCoefficients> {
        let rad = self.radiation(layout, params, omega)?;
        let excitation = self.excitation(layout, params, omega, beta)?;
        Ok(HydroCoefficients {
            omega,
            beta,
            added_mass: rad.added_mass,
            radiation_damping: rad.radiation_damping,
            excitation,
        })
    }
}

/// Closed-form point-absorber interaction model.
///
/// Each translational degree of freedom couples only to the same degree of
/// freedom of other buoys. Isolated terms follow a small sphere in deep
/// water; the cross damping `b_iso * sinc(k d)` is a positive-definite
/// function of separation, which keeps `B` positive semi-definite for any
/// layout. Cross added mass is the matching reactive part
/// `-(b_iso / omega) * cos(k d) / (k d)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointAbsorberKernel;

impl PointAbsorberKernel {
    /// Isolated added mass `(2/3) pi rho r^3` (half the displaced mass).
    pub fn isolated_added_mass(params: &WecParameters) -> f64 {
        2.0 / 3.0 * PI * WATER_DENSITY * params.buoy_radius.powi(3)
    }

    /// Isolated radiation damping `rho g pi r^2 / omega * (k r)^3 * exp(-2 k d_s)`.
    pub fn isolated_damping(params: &WecParameters, omega: f64) -> Result<f64> {
        let k = dispersion_wavenumber(omega)?;
        let r = params.buoy_radius;
        let b0 = WATER_DENSITY * GRAVITY * PI * r * r / omega;
        Ok(b0 * (k * r).powi(3) * (-2.0 * k * params.submergence_depth).exp())
    }

    /// Excitation magnitude `rho g pi r^2 exp(-k d_s)` per unit wave amplitude.
    pub fn excitation_magnitude(params: &WecParameters, omega: f64) -> Result<f64> {
        let k = dispersion_wavenumber(omega)?;
        let r = params.buoy_radius;
        Ok(WATER_DENSITY * GRAVITY * PI * r * r * (-k * params.submergence_depth).exp())
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl HydroKernel for PointAbsorberKernel {
    fn radiation(&self, layout: &Layout, params: &WecParameters, omega: f64) -> Result<RadiationCoefficients> {
        let k = dispersion_wavenumber(omega)?;
        let a_iso = Self::isolated_added_mass(params);
        let b_iso = Self::isolated_damping(params, omega)?;
        let pos = layout.positions();
        let n = pos.len();
        let mut a = DMatrix::zeros(3 * n, 3 * n);
        let mut b = DMatrix::zeros(3 * n, 3 * n);
        for i in 0..n {
            for d in 0..3 {
                a[(3 * i + d, 3 * i + d)] = a_iso;
                b[(3 * i + d, 3 * i + d)] = b_iso;
            }
            for j in (i + 1)..n {
                let dist = pos[i].distance(pos[j]);
                if dist == 0.0 {
                    return Err(Error::DegenerateGeometry { first: i, second: j });
                }
                let kd = k * dist;
                let b_ij = b_iso * sinc(kd);
                let a_ij = -(b_iso / omega) * kd.cos() / kd;
                for d in 0..3 {
                    let (r, c) = (3 * i + d, 3 * j + d);
                    a[(r, c)] = a_ij;
                    a[(c, r)] = a_ij;
                    b[(r, c)] = b_ij;
                    b[(c, r)] = b_ij;
                }
            }
        }
        Ok(RadiationCoefficients { omega, added_mass: a, radiation_damping: b })
    }

    fn excitation(&self, layout: &Layout, params: &WecParameters, omega: f64, beta: f64) -> Result<DVector<Complex64>> {
        let k = dispersion_wavenumber(omega)?;
        let f0 = Self::excitation_magnitude(params, omega)?;
        let (sb, cb) = beta.sin_cos();
        let dirs = [Complex64::new(cb, 0.0), Complex64::new(sb, 0.0), Complex64::new(0.0, 1.0)];
        let pos = layout.positions();
        let mut f = DVector::zeros(3 * pos.len());
        for (i, p) in pos.iter().enumerate() {
            let phase = Complex64::from_polar(f0, k * (p.x * cb + p.y * sb));
            for (d, dir) in dirs.iter().enumerate() {
                f[3 * i + d] = phase * dir;
            }
        }
        Ok(f)
    }
}

/// `kernel_matrices` for the built-in kernel.
pub fn kernel_matrices(layout: &Layout, params: &WecParameters, omega: f64, beta: f64) -> Result<HydroCoefficients> {
    PointAbsorberKernel.coefficients(layout, params, omega, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wavenumber_examples() {
        assert_relative_eq!(dispersion_wavenumber(0.698).unwrap(), 0.698 * 0.698 / 9.81, max_relative = 1e-15);
        // Tp = 9 s
        let wp = 2.0 * PI / 9.0;
        let k = dispersion_wavenumber(wp).unwrap();
        assert!((k - 0.04968).abs() < 1e-5);
        assert!((2.0 * PI / k - 126.5).abs() < 0.1);
        assert_relative_eq!(dispersion_wavenumber(2.0 * wp).unwrap(), 4.0 * k, max_relative = 1e-12);
        assert_relative_eq!(dispersion_wavenumber(9.81f64.sqrt()).unwrap(), 1.0, max_relative = 1e-15);
        assert!(dispersion_wavenumber(0.0).is_err());
        assert!(dispersion_wavenumber(-1.0).is_err());
    }

    #[test]
    fn single_buoy_is_isolated() {
        let p = WecParameters::default();
        let layout = Layout::from_xy(&[(12.0, -3.0)]).unwrap();
        let c = kernel_matrices(&layout, &p, 0.7, 0.3).unwrap();
        let a_iso = PointAbsorberKernel::isolated_added_mass(&p);
        let b_iso = PointAbsorberKernel::isolated_damping(&p, 0.7).unwrap();
        assert_eq!(c.added_mass, DMatrix::identity(3, 3) * a_iso);
        assert_eq!(c.radiation_damping, DMatrix::identity(3, 3) * b_iso);
    }

    #[test]
    fn far_buoys_barely_interact() {
        let p = WecParameters::default();
        let layout = Layout::from_xy(&[(0.0, 0.0), (10_000.0, 0.0)]).unwrap();
        let omega = 0.698;
        let c = kernel_matrices(&layout, &p, omega, 0.0).unwrap();
        let b_iso = PointAbsorberKernel::isolated_damping(&p, omega).unwrap();
        for d in 0..3 {
            assert!(c.radiation_damping[(d, 3 + d)].abs() <= 1e-3 * b_iso);
        }
    }

    #[test]
    fn coincident_buoys_rejected() {
        let p = WecParameters::default();
        let layout = Layout::from_xy(&[(1.0, 1.0), (5.0, 5.0), (1.0, 1.0)]).unwrap();
        assert_eq!(
            kernel_matrices(&layout, &p, 0.7, 0.0).unwrap_err(),
            Error::DegenerateGeometry { first: 0, second: 2 }
        );
    }

    #[test]
    fn excitation_components_follow_direction() {
        let p = WecParameters::default();
        let layout = Layout::from_xy(&[(0.0, 0.0)]).unwrap();
        let beta = 0.4;
        let f = PointAbsorberKernel.excitation(&layout, &p, 0.8, beta).unwrap();
        let f0 = PointAbsorberKernel::excitation_magnitude(&p, 0.8).unwrap();
        assert_relative_eq!(f[0].re, f0 * beta.cos(), max_relative = 1e-14);
        assert_relative_eq!(f[1].re, f0 * beta.sin(), max_relative = 1e-14);
        assert_relative_eq!(f[2].im, f0, max_relative = 1e-14);
    }
}
