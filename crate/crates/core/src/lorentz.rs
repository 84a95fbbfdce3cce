//! The hyperboloid model of the hyperbolic plane.
//!
//! Both `cosh d(z, p)` and `exp B(z, p, ξ)` are restrictions of linear
//! functionals `z ↦ -⟨z, N⟩` to the hyperboloid, which is what makes the
//! minimax problems of the circumcenter module tractable in closed form
//! once the active terms are known.

use alloc::vec::Vec;

/// A vector of `R^{1,2}` with the form `⟨a, b⟩ = -a₀b₀ + a₁b₁ + a₂b₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lorentz3(pub [f64; 3]);

impl Lorentz3 {
    pub fn dot(&self, other: &Lorentz3) -> f64 {
        let (a, b) = (self.0, other.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn scaled(&self, c: f64) -> Lorentz3 {
        Lorentz3([c * self.0[0], c * self.0[1], c * self.0[2]])
    }

    pub fn add(&self, other: &Lorentz3) -> Lorentz3 {
        Lorentz3([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    /// `sqrt(-⟨v, v⟩)` for future-pointing timelike `v`.
    pub fn timelike_norm(&self) -> Option<f64> {
        let q = -self.dot(self);
        if self.0[0] > 0.0 && q > 0.0 {
            Some(libm::sqrt(q))
        } else {
            None
        }
    }
}

/// Solves `G w = 1` for a symmetric system of size at most 3 by Gaussian
/// elimination with partial pivoting.
fn solve_ones(g: &[[f64; 3]; 3], n: usize) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = g[i][j];
        }
        m[i][3] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| libm::fabs(m[a][col]).total_cmp(&libm::fabs(m[b][col])))?;
        if libm::fabs(m[piv][col]) < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..n {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    let mut w = [0.0; 3];
    for i in 0..n {
        w[i] = m[i][3] / m[i][i];
    }
    Some(w)
}

/// Minimizer on the hyperboloid of `max_i -⟨z, N_i⟩` under the assumption
/// that every `N_i` is active at the optimum.
///
/// At such a point `z ∝ Σ wᵢ Nᵢ` with `wᵢ > 0` and all terms equal, so the
/// weights solve the Gram system `(-⟨Nᵢ, Nⱼ⟩) w = 1`. Returns `None` when
/// the weights are not positive or the combination is not timelike.
pub fn equalizing_point(terms: &[Lorentz3]) -> Option<Lorentz3> {
    let n = terms.len();
    if n == 0 || n > 3 {
        return None;
    }
    if n == 1 {
        let norm = terms[0].timelike_norm()?;
        return Some(terms[0].scaled(1.0 / norm));
    }
    let mut g = [[0.0; 3]; 3];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = -terms[i].dot(&terms[j]);
        }
    }
    let w = solve_ones(&g, n)?;
    if w[..n].iter().any(|&x| !(x > 0.0)) {
        return None;
    }
    let v = terms
        .iter()
        .zip(w.iter())
        .fold(Lorentz3([0.0; 3]), |acc, (t, &wi)| acc.add(&t.scaled(wi)));
    let norm = v.timelike_norm()?;
    Some(v.scaled(1.0 / norm))
}

/// All subsets of size one to three of `0..n`, smallest first.
pub fn small_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(alloc::vec![i]);
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(alloc::vec![i, j]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(alloc::vec![i, j, k]);
            }
        }
    }
    out
}
