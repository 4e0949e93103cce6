use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::kernel::{HydroCoefficients, RadiationCoefficients};
use super::params::WecParameters;
use crate::error::{Error, Result};
use crate::Complex64;

/// Systems whose 1-norm condition estimate exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Complex displacement amplitudes `(surge, sway, heave)` per buoy.
#[derive(Debug, Clone)]
pub struct MotionSolution {
    pub omega: f64,
    pub beta: f64,
    pub displacement: DVector<Complex64>,
}

/// Mean absorbed power in one regular wave of unit amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerBreakdown {
    pub total: f64,
    pub per_buoy: Vec<f64>,
}

impl PowerBreakdown {
    pub fn zeros(n: usize) -> Self {
        Self { total: 0.0, per_buoy: vec![0.0; n] }
    }

    /// `self += weight * other`, buoy by buoy.
    pub fn accumulate(&mut self, other: &PowerBreakdown, weight: f64) {
        for (acc, v) in self.per_buoy.iter_mut().zip(&other.per_buoy) {
            *acc += weight * v;
        }
        self.total = self.per_buoy.iter().sum();
    }
}

/// Impedance matrix `-(M + A) w^2 + (B + B_pto) j w + K_pto`, factorized.
///
/// Built once per frequency and reused for every wave direction.
pub struct FrequencySystem {
    omega: f64,
    impedance: DMatrix<Complex64>,
    lu: LU<Complex64, Dyn, Dyn>,
    condition: f64,
}

impl FrequencySystem {
    pub fn new(rad: &RadiationCoefficients, params: &WecParameters) -> Result<Self> {
        let omega = rad.omega;
        let n = rad.added_mass.nrows();
        let w2 = omega * omega;
        let impedance = DMatrix::from_fn(n, n, |r, c| {
            let diag = if r == c { 1.0 } else { 0.0 };
            let re = -(params.mass * diag + rad.added_mass[(r, c)]) * w2 + params.pto_stiffness * diag;
            let im = (rad.radiation_damping[(r, c)] + params.pto_damping * diag) * omega;
            Complex64::new(re, im)
        });
        let lu = impedance.clone().lu();
        let mut system = Self { omega, impedance, lu, condition: f64::INFINITY };
        system.condition = system.condition_estimate();
        if !(system.condition <= MAX_CONDITION) {
            return Err(Error::Numerical { omega, beta: f64::NAN, condition: system.condition });
        }
        Ok(system)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn impedance(&self) -> &DMatrix<Complex64> {
        &self.impedance
    }

    pub fn solve(&self, excitation: &DVector<Complex64>, beta: f64) -> Result<MotionSolution> {
        let displacement =
            self.lu.solve(excitation).ok_or(Error::Numerical { omega: self.omega, beta, condition: f64::INFINITY })?;
        if displacement.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical { omega: self.omega, beta, condition: self.condition });
        }
        Ok(MotionSolution { omega: self.omega, beta, displacement })
    }

    /// Hager–Higham estimate of `||Z||_1 * ||Z^-1||_1`.
    ///
    /// `Z` is complex symmetric (A and B are symmetric), so `Z^-H v` is
    /// computed as `conj(Z^-1 conj(v))` with the same factorization.
    fn condition_estimate(&self) -> f64 {
        let n = self.impedance.nrows();
        if n == 0 {
            return 1.0;
        }
        let norm_z = (0..n).map(|c| self.impedance.column(c).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
        let mut estimate = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let Some(y) = self.lu.solve(&x) else { return f64::INFINITY };
            estimate = y.iter().map(|z| z.norm()).sum::<f64>();
            let xi = y.map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) });
            let Some(w) = self.lu.solve(&xi.map(|z| z.conj())) else { return f64::INFINITY };
            let z = w.map(|v| v.conj());
            let (j, zmax) =
                z.iter()
                    .enumerate()
                    .map(|(i, v)| (i, v.norm()))
                    .fold((0, f64::MIN), |acc, v| if v.1 > acc.1 { v } else { acc });
            let ztx: Complex64 = z.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            if zmax <= ztx.re || j == last_j {
                break;
            }
            last_j = j;
            x = DVector::from_element(n, Complex64::new(0.0, 0.0));
            x[j] = Complex64::new(1.0, 0.0);
        }
        norm_z * estimate
    }
}

/// Solves the frequency-domain equations of motion for one regular wave.
pub fn solve_motion(coeffs: &HydroCoefficients, params: &WecParameters) -> Result<MotionSolution> {
    let rad = RadiationCoefficients {
        omega: coeffs.omega,
        added_mass: coeffs.added_mass.clone(),
        radiation_damping: coeffs.radiation_damping.clone(),
    };
    let system = FrequencySystem::new(&rad, params).map_err(|e| match e {
        Error::Numerical { omega, condition, .. } => Error::Numerical { omega, beta: coeffs.beta, condition },
        other => other,
    })?;
    system.solve(&coeffs.excitation, coeffs.beta)
}

/// Mean power `(w^2 / 2) x^H B_pto x`, split per buoy.
pub fn regular_wave_power(motion: &MotionSolution, params: &WecParameters) -> PowerBreakdown {
    let scale = 0.5 * motion.omega * motion.omega * params.pto_damping;
    let per_buoy: Vec<f64> =
        motion.displacement.as_slice().chunks(3).map(|c| scale * c.iter().map(|z| z.norm_sqr()).sum::<f64>()).collect();
    let total = per_buoy.iter().sum();
    PowerBreakdown { total, per_buoy }
}
