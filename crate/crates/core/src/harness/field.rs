use rayon::prelude::*;

use crate::climate::{annual_average_power, WaveScenario};
use crate::error::{Error, Result};
use crate::geometry::{Layout, Position};
use crate::model::WecParameters;

/// Default distance the field extends beyond the farm.
pub const FIELD_MARGIN: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldNode {
    pub position: Position,
    /// Power a probe buoy at this node would absorb; `None` when masked.
    pub probe_power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyField {
    pub nodes: Vec<FieldNode>,
    /// Farm evaluations spent, one per unmasked node.
    pub evaluations: usize,
}

/// Power absorbed by an extra buoy at `probe` placed next to `layout`.
pub fn probe_power(layout: &Layout, params: &WecParameters, scenario: &WaveScenario, probe: Position) -> Result<f64> {
    let with_probe = layout.with(probe);
    let power = annual_average_power(&with_probe, params, scenario)?;
    Ok(*power.per_buoy.last().expect("probe is present"))
}

/// Probe-buoy power on a square grid covering `[-margin, side + margin]^2`.
///
/// Nodes closer than `min_separation` to a buoy are masked and not evaluated.
pub fn export_energy_field(
    layout: &Layout,
    params: &WecParameters,
    scenario: &WaveScenario,
    side: f64,
    grid_step: f64,
    margin: f64,
    min_separation: f64,
) -> Result<EnergyField> {
    if !(grid_step > 0.0 && side > 0.0 && margin >= 0.0) {
        return Err(Error::Domain("field grid needs a positive step and side and a non-negative margin".into()));
    }
    let lo = -margin;
    let count = ((side + 2.0 * margin) / grid_step + 1e-9).floor() as usize + 1;
    let coords: Vec<f64> = (0..count).map(|i| lo + i as f64 * grid_step).collect();
    let positions: Vec<Position> =
        coords.iter().flat_map(|&y| coords.iter().map(move |&x| Position::new(x, y))).collect();
    let nodes = positions
        .par_iter()
        .map(|&p| {
            let masked = layout.positions().iter().any(|b| b.distance(p) < min_separation);
            let probe_power = if masked { None } else { Some(probe_power(layout, params, scenario, p)?) };
            Ok(FieldNode { position: p, probe_power })
        })
        .collect::<Result<Vec<_>>>()?;
    let evaluations = nodes.iter().filter(|n| n.probe_power.is_some()).count();
    Ok(EnergyField { nodes, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::climate::isolated_annual_power;
    use approx::assert_relative_eq;

    fn cheap() -> WaveScenario {
        WaveScenario::unidirectional("one", 2.0, 8.0, 0.0).unwrap()
    }

    #[test]
    fn empty_layout_is_flat() {
        let params = WecParameters::default();
        let sc = cheap();
        let iso = isolated_annual_power(&params, &sc).unwrap();
        let field = export_energy_field(&Layout::empty(), &params, &sc, 100.0, 50.0, 0.0, 50.0).unwrap();
        assert_eq!(field.nodes.len(), 9);
        assert_eq!(field.evaluations, 9);
        for n in &field.nodes {
            assert_relative_eq!(n.probe_power.unwrap(), iso, max_relative = 1e-9);
        }
    }

    #[test]
    fn masking_matches_separation() {
        let params = WecParameters::default();
        let sc = cheap();
        let layout = Layout::from_xy(&[(50.0, 50.0)]).unwrap();
        let field = export_energy_field(&layout, &params, &sc, 100.0, 10.0, 20.0, 50.0).unwrap();
        for n in &field.nodes {
            let near = n.position.distance(Position::new(50.0, 50.0)) < 50.0;
            assert_eq!(n.probe_power.is_none(), near, "{:?}", n.position);
        }
        assert_eq!(field.evaluations, field.nodes.iter().filter(|n| n.probe_power.is_some()).count());
    }

    #[test]
    fn far_probe_sees_isolated_power() {
        let params = WecParameters::default();
        let sc = cheap();
        let iso = isolated_annual_power(&params, &sc).unwrap();
        let layout = Layout::from_xy(&[(0.0, 0.0), (60.0, 0.0)]).unwrap();
        let far = probe_power(&layout, &params, &sc, Position::new(10_000.0, 0.0)).unwrap();
        assert_relative_eq!(far, iso, max_relative = 1e-3);
    }
}
