//! Evaluation grids.

use thiserror::Error;

/// Points in the default comparison grid, not counting the leading `t = 0`.
pub const DEFAULT_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GridError {
    #[error("grid is empty")]
    Empty,
    #[error("grid point {index} ({value}) is negative or not finite")]
    InvalidPoint { index: usize, value: f64 },
    #[error("grid is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("grid needs at least {0} points")]
    TooFewPoints(usize),
    #[error("grid extent {0} must be positive and finite")]
    InvalidExtent(f64),
}

/// Check that a grid is non-empty, finite, non-negative and strictly
/// increasing.
pub fn check_grid(grid: &[f64]) -> Result<(), GridError> {
    if grid.is_empty() {
        return Err(GridError::Empty);
    }
    for (index, &value) in grid.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(GridError::InvalidPoint { index, value });
        }
    }
    match grid.windows(2).position(|w| w[1] <= w[0]) {
        Some(i) => Err(GridError::NotIncreasing(i + 1)),
        None => Ok(()),
    }
}

/// `t = 0` followed by `points` geometrically spaced times over
/// `[0.01 / h0, 5 / h0]`.
pub fn default_grid(initial_hazard: f64, points: usize) -> Result<Vec<f64>, GridError> {
    if !(initial_hazard > 0.0 && initial_hazard.is_finite()) {
        return Err(GridError::InvalidExtent(initial_hazard));
    }
    geometric_grid(0.01 / initial_hazard, 5.0 / initial_hazard, points)
}

/// `t = 0` followed by `points` geometrically spaced times over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, GridError> {
    if points < 2 {
        return Err(GridError::TooFewPoints(2));
    }
    for v in [lo, hi] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(GridError::InvalidExtent(v));
        }
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let mut grid = Vec::with_capacity(points + 1);
    grid.push(0.0);
    grid.extend((0..points).map(|k| lo * (ratio * k as f64).exp()));
    *grid.last_mut().expect("non-empty") = hi;
    check_grid(&grid)?;
    Ok(grid)
}

/// `points` evenly spaced times over `[0, t_max]`, both ends included.
pub fn uniform_grid(t_max: f64, points: usize) -> Result<Vec<f64>, GridError> {
    if points < 2 {
        return Err(GridError::TooFewPoints(2));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(GridError::InvalidExtent(t_max));
    }
    let step = t_max / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|k| k as f64 * step).collect();
    grid[points - 1] = t_max;
    Ok(grid)
}
