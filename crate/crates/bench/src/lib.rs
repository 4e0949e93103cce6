//! Shared fixtures for the benchmarks.

use wecopt::fitness::farm_side;
use wecopt::Layout;

/// `n` buoys on a square grid filling the farm for `n` buoys.
pub fn grid_layout(n: usize) -> Layout {
    let cols = (n as f64).sqrt().ceil() as usize;
    let side = farm_side(n).expect("n > 0");
    let pitch = side / cols as f64;
    let xy: Vec<(f64, f64)> =
        (0..n).map(|i| ((i % cols) as f64 * pitch + pitch / 2.0, (i / cols) as f64 * pitch + pitch / 2.0)).collect();
    Layout::from_xy(&xy).expect("grid layout is valid")
}
