//! Quadrature building blocks: Gauss–Legendre rules, panel composites,
//! the spectrally accurate periodic log-kernel weights, and Halton points.

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre polynomial from the
/// Chebyshev initial guess; accurate to machine precision for n up to a few
/// thousand.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_pd(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre P_n and its derivative at x, by the three-term recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule: `panels` equal panels over `[a, b]`,
/// `ng` points each. Returns (nodes, weights).
pub fn panel_rule(a: f64, b: f64, panels: usize, ng: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(ng);
    let mut nodes = Vec::with_capacity(panels * ng);
    let mut weights = Vec::with_capacity(panels * ng);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for i in 0..ng {
            nodes.push(mid + 0.5 * h * gx[i]);
            weights.push(0.5 * h * gw[i]);
        }
    }
    (nodes, weights)
}

/// Panels graded geometrically towards `a` (ratio 1/2), for integrands with
/// an integrable singularity at the left endpoint.
pub fn graded_rule(a: f64, b: f64, levels: usize, ng: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(ng);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let len = b - a;
    let mut hi = b;
    for lev in 0..levels {
        let lo = if lev + 1 == levels {
            a
        } else {
            a + len * 0.5f64.powi(lev as i32 + 1)
        };
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for i in 0..ng {
            nodes.push(mid + half * gx[i]);
            weights.push(half * gw[i]);
        }
        hi = lo;
    }
    (nodes, weights)
}

/// Quadrature weights for `∫₀¹ log(4 sin²(π(θ−θ_j))) f(θ_j-grid) dθ` on the
/// uniform grid `θ_j = j/N`, exact for trigonometric polynomials of degree
/// `< N/2` (Martensen–Kussmaul / Kress rule mapped to period 1).
///
/// The returned vector is indexed by the difference `(i − j) mod N`.
pub fn kress_log_weights(n: usize) -> Vec<f64> {
    assert!(n >= 4 && n % 2 == 0, "log-quadrature grid must be even");
    let mut w = vec![0.0; n];
    for (idx, wi) in w.iter_mut().enumerate() {
        let d = idx as f64 / n as f64;
        let mut s = 0.0;
        for m in 1..n / 2 {
            s += (2.0 * std::f64::consts::PI * m as f64 * d).cos() / m as f64;
        }
        *wi = -(2.0 / n as f64) * s
            - (2.0 / (n * n) as f64) * (std::f64::consts::PI * n as f64 * d).cos();
    }
    w
}

/// Same rule evaluated at an arbitrary target `θ` against grid sources
/// `θ_j = j/n`: weight for source j is `kress_log_weight_at(n, θ − θ_j)`.
pub fn kress_log_weight_at(n: usize, d: f64) -> f64 {
    let mut s = 0.0;
    for m in 1..n / 2 {
        s += (2.0 * std::f64::consts::PI * m as f64 * d).cos() / m as f64;
    }
    -(2.0 / n as f64) * s - (2.0 / (n * n) as f64) * (std::f64::consts::PI * n as f64 * d).cos()
}

/// i-th element of the Halton sequence in the given prime base (1-indexed).
pub fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}
