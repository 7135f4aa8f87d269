use nalgebra::DMatrix;

/// Inverse of the dyadic Taylor system.
///
/// With nodes `x_i = 2^{−i}`, `i = 0..m−1`, and `V[i][k] = x_i^{k+1}`, the
/// unknowns `a_k = f^{(k)}(t) h^k / k!` satisfy
/// `V a = (f(t + x_i h) − f(t))_i − R`, so row `j−1` of `V^{−1}` expresses
/// `f^{(j)}` through differences over `[t, t+h]` and Taylor remainders `R`.
#[derive(Debug, Clone)]
pub struct DyadicWeights {
    nodes: Vec<f64>,
    inverse: DMatrix<f64>,
}

impl DyadicWeights {
    /// `m ≥ 1` unknown derivative orders.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "at least one unknown");
        let nodes: Vec<f64> = (0..m).map(|i| 2f64.powi(-(i as i32))).collect();
        let v = DMatrix::from_fn(m, m, |i, k| nodes[i].powi(k as i32 + 1));
        let inverse = v.try_inverse().expect("dyadic Vandermonde matrix is invertible");
        Self { nodes, inverse }
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `Σ_i |W_{j,i}|`.
    pub fn abs_row_sum(&self, j: usize) -> f64 {
        self.inverse.row(j - 1).iter().map(|w| w.abs()).sum()
    }

    /// `Σ_i |W_{j,i}| x_i^p`.
    pub fn abs_row_moment(&self, j: usize, p: usize) -> f64 {
        self.inverse
            .row(j - 1)
            .iter()
            .zip(&self.nodes)
            .map(|(w, x)| w.abs() * x.powi(p as i32))
            .sum()
    }

    /// Weights of row `j` (derivative order `j`).
    pub fn row(&self, j: usize) -> Vec<f64> {
        self.inverse.row(j - 1).iter().copied().collect()
    }
}
