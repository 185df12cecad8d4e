//! Central finite-difference stencils.
//!
//! These are the independent oracles the test suites check jets and tape
//! gradients against; they deliberately share no code with the autodiff
//! paths.

/// First derivative, O(h^2).
pub fn derivative1(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second derivative, O(h^2).
pub fn derivative2(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Third derivative, O(h^2).
pub fn derivative3(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
}

/// Fourth derivative, O(h^2).
pub fn derivative4(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / h.powi(4)
}

/// Gradient of a multivariate function.
pub fn gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xt = x.to_vec();
    for i in 0..x.len() {
        xt[i] = x[i] + h;
        let up = f(&xt);
        xt[i] = x[i] - h;
        let dn = f(&xt);
        xt[i] = x[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    g
}

/// Mixed second partial `d^2 f / dx_i dx_j`.
pub fn mixed2(f: &impl Fn(&[f64]) -> f64, x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    if i == j {
        let g = |t: f64| {
            let mut xt = x.to_vec();
            xt[i] += t;
            f(&xt)
        };
        return derivative2(&g, 0.0, h);
    }
    let mut xt = x.to_vec();
    let mut corner = |si: f64, sj: f64| {
        xt[i] = x[i] + si * h;
        xt[j] = x[j] + sj * h;
        let v = f(&xt);
        xt[i] = x[i];
        xt[j] = x[j];
        v
    };
    (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0))
        / (4.0 * h * h)
}

/// Full Hessian matrix.
pub fn hessian(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = x.len();
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let v = mixed2(f, x, i, j, h);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Trace of the finite-difference Hessian.
pub fn laplacian(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    (0..x.len()).map(|i| mixed2(f, x, i, i, h)).sum()
}

/// `sum_{i,j} d^4 f / dx_i^2 dx_j^2` via nested second-difference stencils.
pub fn bilaplacian(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let d = x.len();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                let g = |t: f64| {
                    let mut xt = x.to_vec();
                    xt[i] += t;
                    f(&xt)
                };
                acc += derivative4(&g, 0.0, h);
            } else {
                // second difference in x_i of the second difference in x_j
                let d2j = |xt: &[f64]| {
                    let mut y = xt.to_vec();
                    let g = |t: f64| {
                        y[j] = xt[j] + t;
                        let v = f(&y);
                        y[j] = xt[j];
                        v
                    };
                    (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h)
                };
                let gi = |t: f64| {
                    let mut xt = x.to_vec();
                    xt[i] += t;
                    d2j(&xt)
                };
                acc += (gi(h) - 2.0 * gi(0.0) + gi(-h)) / (h * h);
            }
        }
    }
    acc
}

/// Leibniz permutation-sum determinant; factorial cost, oracle use only.
pub fn determinant_perm_sum(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = 0.0;
    permute(&mut perm, 0, 1.0, &mut |p, sign| {
        let mut prod = sign;
        for (row, &col) in p.iter().enumerate() {
            prod *= m[row][col];
        }
        acc += prod;
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, sign: f64, visit: &mut impl FnMut(&[usize], f64)) {
    if k == p.len() {
        visit(p, sign);
        return;
    }
    for i in k..p.len() {
        let s = if i == k { sign } else { -sign };
        p.swap(k, i);
        permute(p, k + 1, s, visit);
        p.swap(k, i);
    }
}
