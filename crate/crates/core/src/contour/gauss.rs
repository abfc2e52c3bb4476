//! Gauss-Legendre panels with a spectral cumulative-integration matrix.

use std::sync::OnceLock;

pub const NODES: usize = 20;

pub struct GaussPanel {
    pub x: [f64; NODES],
    pub w: [f64; NODES],
    /// `cumulative[i][m]`: weight of sample `m` in `∫_{-1}^{x_i} f`.
    pub cumulative: [[f64; NODES]; NODES],
    /// `coeff[j][m]`: weight of sample `m` in the j-th Legendre coefficient.
    pub coeff: [[f64; NODES]; NODES],
}

/// Legendre polynomials P_0..=P_n at `x`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 1..n {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

fn build() -> GaussPanel {
    let n = NODES;
    let mut x = [0.0; NODES];
    let mut w = [0.0; NODES];
    for i in 0..n {
        let mut r = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let p = legendre_all(n, r);
            let dp = n as f64 * (r * p[n] - p[n - 1]) / (r * r - 1.0);
            let dr = p[n] / dp;
            r -= dr;
            if dr.abs() < 1e-16 {
                break;
            }
        }
        let p = legendre_all(n, r);
        let dp = n as f64 * (r * p[n] - p[n - 1]) / (r * r - 1.0);
        x[n - 1 - i] = r;
        w[n - 1 - i] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
    let mut coeff = [[0.0; NODES]; NODES];
    for m in 0..n {
        let p = legendre_all(n, x[m]);
        for j in 0..n {
            coeff[j][m] = (2 * j + 1) as f64 / 2.0 * w[m] * p[j];
        }
    }
    let mut cumulative = [[0.0; NODES]; NODES];
    for i in 0..n {
        let p = legendre_all(n, x[i]);
        // ∫_{-1}^{x} P_j
        let mut integ = vec![0.0; n];
        integ[0] = x[i] + 1.0;
        for j in 1..n {
            integ[j] = (p[j + 1] - p[j - 1]) / (2 * j + 1) as f64;
        }
        for m in 0..n {
            cumulative[i][m] = (0..n).map(|j| coeff[j][m] * integ[j]).sum();
        }
    }
    GaussPanel {
        x,
        w,
        cumulative,
        coeff,
    }
}

pub fn panel() -> &'static GaussPanel {
    static PANEL: OnceLock<GaussPanel> = OnceLock::new();
    PANEL.get_or_init(build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_cumulative() {
        let g = panel();
        let total: f64 = g.w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // ∫_{-1}^{x} cos = sin(x) + sin(1)
        for i in 0..NODES {
            let c: f64 = (0..NODES).map(|m| g.cumulative[i][m] * g.x[m].cos()).sum();
            assert!((c - (g.x[i].sin() + 1f64.sin())).abs() < 1e-14);
        }
    }
}
