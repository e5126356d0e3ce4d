//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use facloc_core::EdgeWeights;

/// All-pairs shortest paths by Floyd–Warshall on the full weight matrix.
pub fn floyd_warshall(w: &EdgeWeights) -> Vec<Vec<f64>> {
    let n = w.n();
    let mut d = vec![vec![0.0; n]; n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                d[u][v] = w.weight(u, v);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Standard `E_m(x) = int_1^inf e^(-xt) / t^m dt` by power series (`x < 1`)
/// or modified Lentz continued fraction.
pub fn expint_std(m: u32, x: f64) -> f64 {
    assert!(m >= 1 && x > 0.0);
    let nm1 = (m - 1) as f64;
    if x >= 1.0 {
        let tiny = 1e-300;
        let mut b = x + m as f64;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (nm1 + i as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                return h * (-x).exp();
            }
        }
        panic!("continued fraction did not converge");
    }
    let mut ans = if m == 1 { -x.ln() - EULER_GAMMA } else { 1.0 / nm1 };
    let mut fact = 1.0;
    for i in 1..10_000 {
        fact *= -x / i as f64;
        let del = if (i as f64) != nm1 {
            -fact / (i as f64 - nm1)
        } else {
            let psi = -EULER_GAMMA + (1..=m - 1).map(|k| 1.0 / k as f64).sum::<f64>();
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * 1e-17 {
            return ans;
        }
    }
    panic!("series did not converge");
}

/// `int_x^inf e^-t / t^m dt = x^(1-m) E_m(x)`.
pub fn expint_tail(m: u32, x: f64) -> f64 {
    expint_std(m, x) * x.powi(1 - m as i32)
}

/// `x^m e^x int_x^inf e^-t / t^m dt = x e^x E_m(x)`.
pub fn normalized_expint_cf(m: u32, x: f64) -> f64 {
    x * x.exp() * expint_std(m, x)
}

/// `E[(f + Z)^-p]` for `Z ~ Gamma(k, rate)` by composite Simpson in the
/// variable `t = rate * z`.
pub fn gamma_inverse_moment(f: f64, k: usize, rate: f64, p: i32) -> f64 {
    let ln_fact: f64 = (1..k).map(|i| (i as f64).ln()).sum();
    let hi = k as f64 + 60.0 + 12.0 * (k as f64).sqrt();
    let steps = 400_000;
    let h = hi / steps as f64;
    let g = |t: f64| {
        let dens = if t == 0.0 {
            if k == 1 { 1.0 } else { 0.0 }
        } else {
            ((k - 1) as f64 * t.ln() - t - ln_fact).exp()
        };
        dens * (f + t / rate).powi(-p)
    };
    let mut s = g(0.0) + g(hi);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(i as f64 * h);
    }
    s * h / 3.0
}
