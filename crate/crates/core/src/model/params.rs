use crate::error::{Error, Result};

/// Sea-water density, kg/m^3.
pub const WATER_DENSITY: f64 = 1025.0;
/// Gravitational acceleration, m/s^2.
pub const GRAVITY: f64 = 9.81;

/// Physical constants of one fully submerged three-tether converter.
///
/// `Default` yields the reference converter: a 5 m sphere submerged 8 m in
/// 50 m of water with 55 degree tethers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WecParameters {
    pub buoy_radius: f64,
    pub water_depth: f64,
    pub submergence_depth: f64,
    pub mass: f64,
    /// Carried for completeness; the point-absorber kernel does not use it.
    pub tether_angle_deg: f64,
    pub pto_stiffness: f64,
    pub pto_damping: f64,
}

impl Default for WecParameters {
    fn default() -> Self {
        Self {
            buoy_radius: 5.0,
            water_depth: 50.0,
            submergence_depth: 8.0,
            mass: 376.0e3,
            tether_angle_deg: 55.0,
            pto_stiffness: 2.7e5,
            pto_damping: 1.3e5,
        }
    }
}

impl WecParameters {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("buoy_radius", self.buoy_radius),
            ("water_depth", self.water_depth),
            ("submergence_depth", self.submergence_depth),
            ("mass", self.mass),
            ("tether_angle_deg", self.tether_angle_deg),
            ("pto_stiffness", self.pto_stiffness),
            ("pto_damping", self.pto_damping),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be strictly positive, got {v}")));
            }
        }
        if self.submergence_depth >= self.water_depth {
            return Err(Error::Domain("submergence depth must be less than water depth".into()));
        }
        if self.tether_angle_deg >= 90.0 {
            return Err(Error::Domain("tether angle must lie in (0, 90) degrees".into()));
        }
        Ok(())
    }
}
