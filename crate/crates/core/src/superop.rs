//! Bosonic superoperators acting on field operators.
//!
//! `M O = a^dagger a O`, `P O = O a^dagger a`, `J O = a O a^dagger`. All three
//! are applied in O(dim^2) from the ladder structure, without matrix products.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::FieldOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Superoperator {
    /// Left multiplication by `a^dagger a`.
    M,
    /// Right multiplication by `a^dagger a`.
    P,
    /// Sandwich `a . a^dagger`.
    J,
}

impl Superoperator {
    pub fn apply(self, op: &FieldOperator) -> FieldOperator {
        let (r, c) = op.dim();
        match self {
            Superoperator::M => Array2::from_shape_fn((r, c), |(i, j)| op[[i, j]] * i as f64),
            Superoperator::P => Array2::from_shape_fn((r, c), |(i, j)| op[[i, j]] * j as f64),
            Superoperator::J => Array2::from_shape_fn((r, c), |(i, j)| sandwich(op, i, j)),
        }
    }
}

/// `(a O a^dagger)_{ij} = sqrt((i+1)(j+1)) O_{i+1, j+1}`, zero past the cutoff.
#[inline]
pub(crate) fn sandwich(op: &FieldOperator, i: usize, j: usize) -> Complex64 {
    let (r, c) = op.dim();
    if i + 1 < r && j + 1 < c {
        op[[i + 1, j + 1]] * (((i + 1) * (j + 1)) as f64).sqrt()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{annihilation_operator, number_operator, FockSpace};
    use rand::{Rng, SeedableRng};

    fn random_op(d: usize, seed: u64) -> FieldOperator {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        Array2::from_shape_fn((d, d), |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn max_abs(a: &FieldOperator) -> f64 {
        a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn matches_matrix_products() {
        let space = FockSpace::new(7).unwrap();
        let a = annihilation_operator(space);
        let ad = a.t().mapv(|z| z.conj());
        let n = number_operator(space);
        let o = random_op(7, 1);
        assert!(max_abs(&(Superoperator::M.apply(&o) - n.dot(&o))) < 1e-14);
        assert!(max_abs(&(Superoperator::P.apply(&o) - o.dot(&n))) < 1e-14);
        assert!(max_abs(&(Superoperator::J.apply(&o) - a.dot(&o).dot(&ad))) < 1e-14);
    }

    #[test]
    fn commutation_relations() {
        use Superoperator::*;
        for seed in 0..5 {
            let o = random_op(9, seed);
            let jm = J.apply(&M.apply(&o)) - M.apply(&J.apply(&o));
            let jp = J.apply(&P.apply(&o)) - P.apply(&J.apply(&o));
            let mp = M.apply(&P.apply(&o)) - P.apply(&M.apply(&o));
            let jo = J.apply(&o);
            assert!(max_abs(&(jm - &jo)) < 1e-12);
            assert!(max_abs(&(jp - &jo)) < 1e-12);
            assert!(max_abs(&mp) < 1e-12);
        }
    }
}
