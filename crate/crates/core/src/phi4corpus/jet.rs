//! Truncated multivariate Taylor jets with complex coefficients.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::series::{indices_of_degree, MultiIndex};

/// Multi-indices up to a total order and the product table between them.
#[derive(Debug)]
pub struct JetSpace {
    dims: usize,
    order: u32,
    index: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
    products: Vec<(usize, usize, usize)>,
}

impl JetSpace {
    pub fn new(dims: usize, order: u32) -> Arc<JetSpace> {
        let index: Vec<MultiIndex> = (0..=order).flat_map(|n| indices_of_degree(dims, n)).collect();
        let position = index.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect::<HashMap<_, _>>();
        let mut products = Vec::new();
        for (i, a) in index.iter().enumerate() {
            for (j, b) in index.iter().enumerate() {
                let sum: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = position.get(&sum) {
                    products.push((i, j, k));
                }
            }
        }
        Arc::new(JetSpace { dims, order, index, position, products })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

/// `Σ_α a_α h^α` with `|α| <= order`.
#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<JetSpace>,
    coef: Vec<Complex64>,
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, c: Complex64) -> Jet {
        let mut coef = vec![Complex64::new(0.0, 0.0); space.len()];
        coef[0] = c;
        Jet { space: space.clone(), coef }
    }

    /// `c * exp(w·h)`.
    pub fn exp_linear(space: &Arc<JetSpace>, c: Complex64, w: &[Complex64]) -> Jet {
        let coef = space
            .index
            .iter()
            .map(|alpha| {
                let mut v = c;
                for (&a, &wk) in alpha.iter().zip(w) {
                    for j in 1..=a {
                        v *= wk / j as f64;
                    }
                }
                v
            })
            .collect();
        Jet { space: space.clone(), coef }
    }

    pub fn value(&self) -> Complex64 {
        self.coef[0]
    }

    /// `∂^α` at the expansion point, `α! a_α`.
    pub fn derivative(&self, alpha: &[u32]) -> Complex64 {
        let Some(&k) = self.space.position.get(alpha) else {
            panic!("derivative order exceeds the jet order");
        };
        let fact: f64 = alpha.iter().map(|&a| (1..=a).product::<u32>() as f64).product();
        self.coef[k] * fact
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let coef = self.coef.iter().zip(&other.coef).map(|(a, b)| a + b).collect();
        Jet { space: self.space.clone(), coef }
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet { space: self.space.clone(), coef: self.coef.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let mut coef = vec![Complex64::new(0.0, 0.0); self.space.len()];
        for &(i, j, k) in &self.space.products {
            coef[k] += self.coef[i] * other.coef[j];
        }
        Jet { space: self.space.clone(), coef }
    }

    /// `1/a = (1/a0) Σ_k (-u/a0)^k` with `u = a - a0`.
    pub fn recip(&self) -> Jet {
        let a0 = self.coef[0];
        let mut u = self.scale(-1.0 / a0);
        u.coef[0] = Complex64::new(0.0, 0.0);
        let one = Jet::constant(&self.space, Complex64::new(1.0, 0.0));
        let mut acc = one.clone();
        let mut pow = one;
        for _ in 0..self.space.order {
            pow = pow.mul(&u);
            acc = acc.add(&pow);
        }
        acc.scale(1.0 / a0)
    }
}
