//! Piecewise-linear finite elements on (0, 1) with homogeneous Dirichlet
//! conditions, eliminated so that all vectors live on the interior nodes
//! `x_j = jh`, `j = 1..M−1`.

use crate::{Error, Result};

/// Uniform partition of (0, 1) into `m` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub m: usize,
    pub h: f64,
}

impl Mesh1D {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("mesh needs at least 2 elements, got {m}")));
        }
        Ok(Self { m, h: 1.0 / m as f64 })
    }

    pub fn interior_len(&self) -> usize {
        self.m - 1
    }

    /// Coordinate of node `j`, 0 ≤ j ≤ M.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.m as f64
    }

    /// Interior node coordinates `x_1, …, x_{M−1}`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.m).map(|j| self.node(j)).collect()
    }

    /// All node coordinates `x_0, …, x_M`.
    pub fn all_nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|j| self.node(j)).collect()
    }
}

/// Tridiagonal matrix. `sub[i]` multiplies `x[i−1]` in row `i` (so `sub[0]`
/// is unused), `sup[i]` multiplies `x[i+1]` (so the last entry is unused).
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TriDiag {
    /// Constant-band Toeplitz matrix of size `n`.
    pub fn toeplitz(n: usize, off: f64, main: f64) -> Self {
        let mut sub = vec![off; n];
        let mut sup = vec![off; n];
        if n > 0 {
            sub[0] = 0.0;
            sup[n - 1] = 0.0;
        }
        Self { sub, diag: vec![main; n], sup }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.len()];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &TriDiag, b: f64) -> Result<TriDiag> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "cannot combine tridiagonal matrices of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mix = |l: &[f64], r: &[f64]| l.iter().zip(r).map(|(x, y)| a * x + b * y).collect();
        Ok(TriDiag {
            sub: mix(&self.sub, &other.sub),
            diag: mix(&self.diag, &other.diag),
            sup: mix(&self.sup, &other.sup),
        })
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.len())
            .map(|i| self.sub[i].abs() + self.diag[i].abs() + self.sup[i].abs())
            .fold(0.0, f64::max)
    }

    pub fn factor(&self) -> Result<FactoredTriDiag> {
        FactoredTriDiag::new(self)
    }
}

/// LU factors of a tridiagonal matrix (Thomas algorithm), reusable across solves.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredTriDiag {
    sub: Vec<f64>,
    /// Pivots `d_i` of the LU factorization.
    pivots: Vec<f64>,
    /// `sup[i] / d_i`.
    upper: Vec<f64>,
}

impl FactoredTriDiag {
    pub fn new(a: &TriDiag) -> Result<Self> {
        let n = a.len();
        let scale = a.norm_inf().max(f64::MIN_POSITIVE);
        let mut pivots = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            let d = if i == 0 { a.diag[0] } else { a.diag[i] - a.sub[i] * upper[i - 1] };
            if d.abs() <= 1e-14 * scale || !d.is_finite() {
                return Err(Error::Singular { row: i });
            }
            pivots[i] = d;
            upper[i] = if i + 1 < n { a.sup[i] / d } else { 0.0 };
        }
        Ok(Self { sub: a.sub.clone(), pivots, upper })
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Every pivot positive, which for a symmetric matrix means positive definite.
    pub fn pivots_positive(&self) -> bool {
        self.pivots.iter().all(|&d| d > 0.0)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        if x.len() != n {
            return Err(Error::Dimension(format!("right-hand side has length {}, expected {n}", x.len())));
        }
        for i in 0..n {
            let carry = if i > 0 { self.sub[i] * x[i - 1] } else { 0.0 };
            x[i] = (x[i] - carry) / self.pivots[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= self.upper[i] * x[i + 1];
        }
        Ok(())
    }
}

/// One-shot solve of `a x = rhs`.
pub fn tridiag_solve(a: &TriDiag, rhs: &[f64]) -> Result<Vec<f64>> {
    a.factor()?.solve(rhs)
}

/// Mesh with its assembled mass and stiffness matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct FemOperators {
    pub mesh: Mesh1D,
    pub mass: TriDiag,
    pub stiffness: TriDiag,
}

/// Exact mass `(h/6)[1, 4, 1]` and stiffness `(1/h)[−1, 2, −1]` on the interior nodes.
pub fn assemble(mesh: &Mesh1D) -> FemOperators {
    let n = mesh.interior_len();
    let h = mesh.h;
    FemOperators {
        mesh: *mesh,
        mass: TriDiag::toeplitz(n, h / 6.0, 4.0 * h / 6.0),
        stiffness: TriDiag::toeplitz(n, -1.0 / h, 2.0 / h),
    }
}

impl FemOperators {
    pub fn new(m: usize) -> Result<Self> {
        Ok(assemble(&Mesh1D::new(m)?))
    }

    /// Load vector `(I_h f, χ_j)` from nodal values `f_0, …, f_M` including the boundary.
    pub fn load_full(&self, f: &[f64]) -> Result<Vec<f64>> {
        let m = self.mesh.m;
        if f.len() != m + 1 {
            return Err(Error::Dimension(format!("full nodal vector has length {}, expected {}", f.len(), m + 1)));
        }
        let c = self.mesh.h / 6.0;
        Ok((1..m).map(|j| c * (f[j - 1] + 4.0 * f[j] + f[j + 1])).collect())
    }
}

/// `√(h Σ v_j²)`.
pub fn l2_norm_discrete(v: &[f64], h: f64) -> f64 {
    (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

/// Values of `f` at the interior nodes.
pub fn interpolate<F: Fn(f64) -> f64>(f: F, mesh: &Mesh1D) -> Vec<f64> {
    (1..mesh.m).map(|j| f(mesh.node(j))).collect()
}

/// Values of `f` at all nodes, boundary included.
pub fn interpolate_full<F: Fn(f64) -> f64>(f: F, mesh: &Mesh1D) -> Vec<f64> {
    (0..=mesh.m).map(|j| f(mesh.node(j))).collect()
}
