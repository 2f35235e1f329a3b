//! Optional outer maximisation over measurement directions in the x–z plane.

use rayon::prelude::*;

use crate::error::Result;
use crate::qmath::BlochVector;
use crate::scalar::Real;
use crate::states::TwoQubitState;

use super::assemblage::{assemblage_from_directions, Side};
use super::lhs::steering_radius;

/// Best radius found on a direction grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionScan<T> {
    pub radius: T,
    pub directions: [BlochVector<T>; 2],
    pub evaluated: usize,
}

/// Maximises the two-setting radius over pairs of directions
/// `(sin φ, 0, cos φ)` with `φ` on `points` equally spaced angles in `[0, π)`.
pub fn max_radius_over_directions<T: Real>(
    state: &TwoQubitState<T>,
    side: Side,
    points: usize,
) -> Result<DirectionScan<T>> {
    let points = points.max(2);
    let dir = |k: usize| {
        let phi = T::PI() * T::lit(k as f64) / T::lit(points as f64);
        BlochVector::new(phi.sin(), T::zero(), phi.cos())
    };
    let pairs: Vec<(usize, usize)> = (0..points).flat_map(|i| ((i + 1)..points).map(move |j| (i, j))).collect();
    let radii: Vec<Result<(T, usize, usize)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let asm = assemblage_from_directions(state, side, &[dir(i), dir(j)])?;
            Ok((steering_radius(&asm)?.radius, i, j))
        })
        .collect();
    let mut best: Option<(T, usize, usize)> = None;
    for r in radii {
        let r = r?;
        if best.is_none_or(|b| r.0 > b.0) {
            best = Some(r);
        }
    }
    let (radius, i, j) = best.expect("at least one direction pair");
    Ok(DirectionScan { radius, directions: [dir(i), dir(j)], evaluated: pairs.len() })
}
