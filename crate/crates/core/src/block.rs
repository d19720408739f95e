//! Two-by-two molecular block decomposition of the total density operator.

use nalgebra::DMatrix;
use ndarray::{s, Array1, Array2, Zip};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::FieldOperator;
use crate::error::{Error, Result};

/// The four field-space blocks `<mol|rho|mol'>` in the basis
/// `{|e> = |n, m>, |g> = |n-1, m+1>}` at one instant (in units of `1/omega`).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBlock {
    pub rho_ee: FieldOperator,
    pub rho_eg: FieldOperator,
    pub rho_ge: FieldOperator,
    pub rho_gg: FieldOperator,
    pub time: f64,
}

/// Reduced molecular state `[[Tr rho_ee, Tr rho_eg], [Tr rho_ge, Tr rho_gg]]`.
pub type ReducedMolecularState = [[Complex64; 2]; 2];

fn trace(m: &FieldOperator) -> Complex64 {
    m.diag().sum()
}

fn dagger(m: &FieldOperator) -> FieldOperator {
    m.t().mapv(|z| z.conj())
}

fn max_abs(a: &FieldOperator, b: &FieldOperator) -> f64 {
    Zip::from(a)
        .and(b)
        .fold(0.0f64, |acc, x, y| acc.max((x - y).norm()))
}

/// Tr(X Y) without forming the product.
pub(crate) fn trace_product(x: &FieldOperator, y: &FieldOperator) -> Complex64 {
    Zip::from(x).and(&y.t()).fold(Complex64::new(0.0, 0.0), |acc, a, b| acc + a * b)
}

impl DensityBlock {
    pub fn zeros(dim: usize, time: f64) -> Self {
        let z = Array2::zeros((dim, dim));
        Self {
            rho_ee: z.clone(),
            rho_eg: z.clone(),
            rho_ge: z.clone(),
            rho_gg: z,
            time,
        }
    }

    /// Product state `(|e> + |g>)/sqrt(2) (x) |psi>`: all four blocks are `|psi><psi|/2`.
    pub fn product_initial(psi: &Array1<Complex64>) -> Self {
        let d = psi.len();
        let half = Array2::from_shape_fn((d, d), |(i, j)| 0.5 * psi[i] * psi[j].conj());
        Self {
            rho_ee: half.clone(),
            rho_eg: half.clone(),
            rho_ge: half.clone(),
            rho_gg: half,
            time: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rho_ee.nrows()
    }

    pub fn blocks(&self) -> [&FieldOperator; 4] {
        [&self.rho_ee, &self.rho_eg, &self.rho_ge, &self.rho_gg]
    }

    /// Fails unless all four blocks are square with the same dimension.
    pub fn check_shape(&self) -> Result<()> {
        let d = self.dim();
        for b in self.blocks() {
            for n in [b.nrows(), b.ncols()] {
                if n != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: n,
                    });
                }
            }
        }
        Ok(())
    }

    /// `c1 * self + c2 * other`, keeping `self.time`.
    pub fn combine(&self, c1: Complex64, other: &DensityBlock, c2: Complex64) -> DensityBlock {
        let f = |a: &FieldOperator, b: &FieldOperator| a.mapv(|z| z * c1) + b.mapv(|z| z * c2);
        DensityBlock {
            rho_ee: f(&self.rho_ee, &other.rho_ee),
            rho_eg: f(&self.rho_eg, &other.rho_eg),
            rho_ge: f(&self.rho_ge, &other.rho_ge),
            rho_gg: f(&self.rho_gg, &other.rho_gg),
            time: self.time,
        }
    }

    /// Block matrix `[[ee, eg], [ge, gg]]` with the molecular index outermost.
    pub fn total_density(&self) -> Array2<Complex64> {
        let d = self.dim();
        let mut t = Array2::zeros((2 * d, 2 * d));
        t.slice_mut(s![..d, ..d]).assign(&self.rho_ee);
        t.slice_mut(s![..d, d..]).assign(&self.rho_eg);
        t.slice_mut(s![d.., ..d]).assign(&self.rho_ge);
        t.slice_mut(s![d.., d..]).assign(&self.rho_gg);
        t
    }

    /// Partial trace over the molecules.
    pub fn reduced_field(&self) -> FieldOperator {
        &self.rho_ee + &self.rho_gg
    }

    /// Partial trace over the field.
    pub fn reduced_molecular(&self) -> ReducedMolecularState {
        [
            [trace(&self.rho_ee), trace(&self.rho_eg)],
            [trace(&self.rho_ge), trace(&self.rho_gg)],
        ]
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.rho_ee) + trace(&self.rho_gg)
    }

    /// `|Tr rho_total - 1|`.
    pub fn trace_error(&self) -> f64 {
        (self.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    /// Largest element-wise violation of `ee = ee^dagger`, `gg = gg^dagger`
    /// and `ge = eg^dagger`.
    pub fn hermiticity_residue(&self) -> f64 {
        max_abs(&self.rho_ee, &dagger(&self.rho_ee))
            .max(max_abs(&self.rho_gg, &dagger(&self.rho_gg)))
            .max(max_abs(&self.rho_ge, &dagger(&self.rho_eg)))
    }

    /// Tr(rho_total^2), exploiting the block structure.
    pub fn purity(&self) -> f64 {
        let p = trace_product(&self.rho_ee, &self.rho_ee)
            + trace_product(&self.rho_gg, &self.rho_gg)
            + 2.0 * trace_product(&self.rho_eg, &self.rho_ge);
        p.re
    }

    /// Smallest eigenvalue of the Hermitian part of the total density matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let t = self.total_density();
        let n = t.nrows();
        let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (t[[i, j]] + t[[j, i]].conj()));
        m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether every eigenvalue of the Hermitian part exceeds `floor`,
    /// decided by a Cholesky factorization of `rho - floor * I` that fails on
    /// the first non-positive pivot. Much cheaper than
    /// [`Self::min_eigenvalue`] for scans over long grids.
    pub fn eigenvalues_above(&self, floor: f64) -> bool {
        let t = self.total_density();
        let n = t.nrows();
        let mut l = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (t[[i, j]] + t[[j, i]].conj()));
        for j in 0..n {
            let mut d = l[[j, j]].re - floor;
            for k in 0..j {
                d -= l[[j, k]].norm_sqr();
            }
            if !(d > 0.0) {
                return false;
            }
            let ljj = d.sqrt();
            l[[j, j]] = Complex64::new(ljj, 0.0);
            for i in j + 1..n {
                let mut v = l[[i, j]];
                for k in 0..j {
                    v -= l[[i, k]] * l[[j, k]].conj();
                }
                l[[i, j]] = v / ljj;
            }
        }
        true
    }

    /// Largest element-wise difference to another block set.
    pub fn max_deviation(&self, other: &DensityBlock) -> f64 {
        self.blocks()
            .iter()
            .zip(other.blocks())
            .map(|(a, b)| max_abs(a, b))
            .fold(0.0, f64::max)
    }

    /// Photon population of the top `levels` Fock states in the reduced field.
    pub fn top_population(&self, levels: usize) -> f64 {
        let d = self.dim();
        (d.saturating_sub(levels)..d)
            .map(|j| (self.rho_ee[[j, j]] + self.rho_gg[[j, j]]).re)
            .sum()
    }
}

/// Per-instant diagnostics of a block set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub trace_error: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn of(block: &DensityBlock) -> Self {
        Self {
            trace_error: block.trace_error(),
            hermiticity: block.hermiticity_residue(),
            min_eigenvalue: block.min_eigenvalue(),
        }
    }
}
