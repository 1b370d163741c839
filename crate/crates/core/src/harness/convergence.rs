//! Two-mesh error estimates and observed rates.

use std::fmt;

use crate::fem1d::l2_norm_discrete;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    U,
    Z,
    C,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::U => "U",
            Variable::Z => "Z",
            Variable::C => "C",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Temporal,
    Spatial,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Temporal => "temporal",
            Direction::Spatial => "spatial",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// `N` for temporal studies, `M` for spatial ones.
    pub param: usize,
    pub error: f64,
    /// `log₂(E_{i−1} / E_i)`; absent on the first row.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub alpha0: f64,
    pub variable: Variable,
    pub direction: Direction,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Builds the rows from a ladder and its errors.
    pub fn from_errors(alpha0: f64, variable: Variable, direction: Direction, params: &[usize], errors: &[f64]) -> Result<Self> {
        if params.len() != errors.len() {
            return Err(Error::Dimension(format!(
                "{} ladder entries but {} errors",
                params.len(),
                errors.len()
            )));
        }
        let rates = rates_from_errors(errors)?;
        let rows = params
            .iter()
            .zip(errors)
            .enumerate()
            .map(|(i, (&param, &error))| ConvergenceRow {
                param,
                error,
                rate: i.checked_sub(1).map(|k| rates[k]),
            })
            .collect();
        Ok(Self { alpha0, variable, direction, rows })
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.rate).collect()
    }
}

/// `rates[i] = log₂(errors[i] / errors[i+1])`.
pub fn rates_from_errors(errors: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = errors.iter().find(|&&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::Domain(format!("rates need positive finite errors, got {bad}")));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// `max_{1≤n} √(h Σ_j (fine[2n]_j − coarse[n]_j)²)` over the coarse levels
/// present in both trajectories.
pub fn two_mesh_temporal_error(coarse: &[Vec<f64>], fine: &[Vec<f64>], h: f64) -> Result<f64> {
    let width = coarse.first().map_or(0, Vec::len);
    if fine.first().map_or(0, Vec::len) != width {
        return Err(Error::Dimension("temporal two-mesh comparison needs identical spatial meshes".into()));
    }
    let mut worst: f64 = 0.0;
    for (n, row) in coarse.iter().enumerate().skip(1) {
        let Some(fine_row) = fine.get(2 * n) else { break };
        let diff: Vec<f64> = fine_row.iter().zip(row).map(|(f, c)| f - c).collect();
        worst = worst.max(l2_norm_discrete(&diff, h));
    }
    Ok(worst)
}

/// `max_n √(h Σ_j (fine[n]_{2j} − coarse[n]_j)²)` with interior rows of
/// lengths `M − 1` and `2M − 1` and the coarse step `h`.
pub fn two_mesh_spatial_error(coarse: &[Vec<f64>], fine: &[Vec<f64>], h: f64) -> Result<f64> {
    if coarse.len() != fine.len() {
        return Err(Error::Dimension(format!(
            "spatial two-mesh comparison needs identical time grids ({} vs {} levels)",
            coarse.len(),
            fine.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for (c, f) in coarse.iter().zip(fine) {
        if f.len() != 2 * c.len() + 1 {
            return Err(Error::Dimension(format!(
                "fine rows must have 2·{}+1 interior values, got {}",
                c.len(),
                f.len()
            )));
        }
        let diff: Vec<f64> = c.iter().enumerate().map(|(i, v)| f[2 * i + 1] - v).collect();
        worst = worst.max(l2_norm_discrete(&diff, h));
    }
    Ok(worst)
}
