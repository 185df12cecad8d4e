//! Truncated Taylor jets along one or two input directions.
//!
//! A jet stores Taylor coefficients `c_k = f^(k)/k!` of a scalar quantity
//! along a perturbation direction; products are truncated Cauchy
//! convolutions, so no factorial bookkeeping is needed until a derivative
//! is read off at an API boundary. [`Jet1`] carries one direction up to
//! order 4, [`Jet2`] two directions up to order (2, 2) — enough for a
//! bilaplacian and for third directional derivatives.

use crate::error::{Error, Result};
use crate::network::ActivationKind;

/// Maximum supported order along a single direction.
pub const MAX_ORDER1: usize = 4;
/// Maximum supported order along each of two directions.
pub const MAX_ORDER2: usize = 2;

pub(crate) const FACTORIALS: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Widest coefficient buffer any jet shape needs (5 for order-4 Jet1,
/// 9 for a (2,2) Jet2).
pub(crate) const MAX_WIDTH: usize = 9;

// ---------------------------------------------------------------------------
// Raw coefficient kernels, shared by the value types and the tape.
//
// A coefficient block is laid out row-major as `rows x cols`, where `rows`
// indexes powers of the first direction and `cols` powers of the second;
// plain Jet1 data is the `cols == 1` case of the same kernels, which keeps
// marginals bit-identical between the two types.
// ---------------------------------------------------------------------------

/// Truncated product: `out[i][j] = sum_{p<=i, q<=j} a[p][q] * b[i-p][j-q]`.
pub(crate) fn conv_into(a: &[f64], b: &[f64], out: &mut [f64], rows: usize, cols: usize) {
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = 0.0;
            for p in 0..=i {
                for q in 0..=j {
                    acc += a[p * cols + q] * b[(i - p) * cols + (j - q)];
                }
            }
            out[i * cols + j] = acc;
        }
    }
}

/// Adjoint of `conv_into` with respect to its first argument:
/// `adj_a[p][q] += sum_{i>=p, j>=q} adj_out[i][j] * b[i-p][j-q]`.
pub(crate) fn corr_acc(adj_out: &[f64], b: &[f64], adj_a: &mut [f64], rows: usize, cols: usize) {
    for p in 0..rows {
        for q in 0..cols {
            let mut acc = 0.0;
            for i in p..rows {
                for j in q..cols {
                    acc += adj_out[i * cols + j] * b[(i - p) * cols + (j - q)];
                }
            }
            adj_a[p * cols + q] += acc;
        }
    }
}

/// Whether the rectifier family takes its active branch.
///
/// At an input value of exactly zero the inactive branch is chosen, i.e.
/// the output jet is identically zero; the event has measure zero under
/// continuous sampling but the convention must be fixed.
#[inline]
pub(crate) fn on_active_branch(value: f64) -> bool {
    value > 0.0
}

/// Activation composed through a jet. `Square` is `x*x` everywhere; the
/// rectified units are branch polynomials gated on the input value.
pub(crate) fn act_into(
    kind: ActivationKind,
    a: &[f64],
    out: &mut [f64],
    rows: usize,
    cols: usize,
) {
    let w = rows * cols;
    match kind {
        ActivationKind::Square => conv_into(a, b_same(a), out, rows, cols),
        ActivationKind::Relu => {
            if on_active_branch(a[0]) {
                out[..w].copy_from_slice(&a[..w]);
            } else {
                out[..w].fill(0.0);
            }
        }
        ActivationKind::Requ => {
            if on_active_branch(a[0]) {
                conv_into(a, b_same(a), out, rows, cols);
            } else {
                out[..w].fill(0.0);
            }
        }
        ActivationKind::Recu => {
            if on_active_branch(a[0]) {
                let mut sq = [0.0; MAX_WIDTH];
                conv_into(a, a, &mut sq[..w], rows, cols);
                conv_into(&sq[..w], a, out, rows, cols);
            } else {
                out[..w].fill(0.0);
            }
        }
    }
}

/// Jet of the pointwise derivative `sigma'(a)`; used by the tape backward.
pub(crate) fn act_deriv_into(
    kind: ActivationKind,
    a: &[f64],
    out: &mut [f64],
    rows: usize,
    cols: usize,
) {
    let w = rows * cols;
    match kind {
        ActivationKind::Square => {
            for k in 0..w {
                out[k] = 2.0 * a[k];
            }
        }
        ActivationKind::Relu => {
            out[..w].fill(0.0);
            if on_active_branch(a[0]) {
                out[0] = 1.0;
            }
        }
        ActivationKind::Requ => {
            if on_active_branch(a[0]) {
                for k in 0..w {
                    out[k] = 2.0 * a[k];
                }
            } else {
                out[..w].fill(0.0);
            }
        }
        ActivationKind::Recu => {
            if on_active_branch(a[0]) {
                conv_into(a, a, out, rows, cols);
                for k in 0..w {
                    out[k] *= 3.0;
                }
            } else {
                out[..w].fill(0.0);
            }
        }
    }
}

// Lets `conv_into(a, a, ..)` borrow-check when `a` aliases both arguments.
#[inline]
fn b_same(a: &[f64]) -> &[f64] {
    a
}

// ---------------------------------------------------------------------------
// Ring abstraction over jets (and plain reals) for analytic formulas.
// ---------------------------------------------------------------------------

/// Commutative-ring operations plus elementary transcendentals, implemented
/// by [`Jet1`], [`Jet2`] and `f64`. Problem definitions are written once
/// against this trait and evaluated either as plain values or as jets.
pub trait JetRing: Clone {
    fn value(&self) -> f64;
    fn constant_like(&self, v: f64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, k: f64) -> Self;
    fn add_scalar(&self, k: f64) -> Self;

    /// Compose a univariate analytic function through the jet, given its
    /// derivatives `f, f', .., f''''` at the jet's value. Horner evaluation
    /// of the Taylor expansion in the nilpotent part; five terms cover
    /// every supported truncation.
    fn compose(&self, derivs: &[f64; 5]) -> Self {
        let ghat = self.add_scalar(-self.value());
        let mut acc = self.constant_like(derivs[4] / FACTORIALS[4]);
        for k in (0..4).rev() {
            acc = acc.mul(&ghat).add_scalar(derivs[k] / FACTORIALS[k]);
        }
        acc
    }

    fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s, -c, s])
    }

    fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c, s, c])
    }

    fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&[e, e, e, e, e])
    }
}

impl JetRing for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn constant_like(&self, v: f64) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn add_scalar(&self, k: f64) -> Self {
        self + k
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
}

// ---------------------------------------------------------------------------
// Jet1
// ---------------------------------------------------------------------------

/// Taylor coefficients of a scalar along one direction, orders 0..=4.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    coeffs: Vec<f64>,
}

impl Jet1 {
    /// Wraps raw Taylor coefficients `c_0..c_K`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_ORDER1 + 1 {
            return Err(Error::UnsupportedOrder {
                order: coeffs.len().saturating_sub(1),
                max: MAX_ORDER1,
            });
        }
        Ok(Self { coeffs })
    }

    /// Constant jet: value with all derivative coefficients zero.
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self::new(coeffs).expect("order within bounds")
    }

    /// Coordinate jet `value + slope * eps`.
    pub fn variable(value: f64, slope: f64, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = slope;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `k`-th derivative along the direction, i.e. `k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * FACTORIALS[k]
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.coeffs.len() != o.coeffs.len() {
            return Err(self.shape_error(o));
        }
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        conv_into(&self.coeffs, &o.coeffs, &mut out, n, 1);
        Ok(Self { coeffs: out })
    }

    /// Activation composed through the jet.
    pub fn activate(&self, kind: ActivationKind) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        act_into(kind, &self.coeffs, &mut out, n, 1);
        Self { coeffs: out }
    }

    fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.coeffs.len() != o.coeffs.len() {
            return Err(self.shape_error(o));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn shape_error(&self, o: &Self) -> Error {
        Error::ShapeMismatch {
            expected: format!("order {}", self.order()),
            got: format!("order {}", o.order()),
        }
    }
}

impl JetRing for Jet1 {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }
    fn constant_like(&self, v: f64) -> Self {
        Self::constant(v, self.order())
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("jet order mismatch")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("jet order mismatch")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("jet order mismatch")
    }
    fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
    fn add_scalar(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }
}

impl std::ops::Add for &Jet1 {
    type Output = Jet1;
    fn add(self, o: &Jet1) -> Jet1 {
        JetRing::add(self, o)
    }
}

impl std::ops::Sub for &Jet1 {
    type Output = Jet1;
    fn sub(self, o: &Jet1) -> Jet1 {
        JetRing::sub(self, o)
    }
}

impl std::ops::Mul for &Jet1 {
    type Output = Jet1;
    fn mul(self, o: &Jet1) -> Jet1 {
        JetRing::mul(self, o)
    }
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

/// Bivariate Taylor coefficients along two directions, row-major
/// `(K1+1) x (K2+1)` with `K1, K2 <= 2`. Row 0 / column 0 marginals agree
/// bit-for-bit with the corresponding [`Jet1`] computation because both
/// types share one convolution kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    coeffs: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Jet2 {
    pub fn new(coeffs: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > MAX_ORDER2 + 1 || cols > MAX_ORDER2 + 1 {
            return Err(Error::UnsupportedOrder {
                order: rows.max(cols).saturating_sub(1),
                max: MAX_ORDER2,
            });
        }
        if coeffs.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coefficients", rows * cols),
                got: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { coeffs, rows, cols })
    }

    pub fn constant(value: f64, rows: usize, cols: usize) -> Self {
        let mut coeffs = vec![0.0; rows * cols];
        coeffs[0] = value;
        Self::new(coeffs, rows, cols).expect("orders within bounds")
    }

    /// Coordinate jet `value + s1 * eps1 + s2 * eps2`.
    pub fn variable(value: f64, s1: f64, s2: f64, rows: usize, cols: usize) -> Self {
        let mut j = Self::constant(value, rows, cols);
        if rows >= 2 {
            j.coeffs[cols] = s1;
        }
        if cols >= 2 {
            j.coeffs[1] = s2;
        }
        j
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.cols + j]
    }

    /// Mixed derivative `d^(i+j) f / d eps1^i d eps2^j = i! j! c_{ij}`.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * FACTORIALS[i] * FACTORIALS[j]
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(self.shape_error(o));
        }
        let mut out = vec![0.0; self.coeffs.len()];
        conv_into(&self.coeffs, &o.coeffs, &mut out, self.rows, self.cols);
        Ok(Self {
            coeffs: out,
            rows: self.rows,
            cols: self.cols,
        })
    }

    pub fn activate(&self, kind: ActivationKind) -> Self {
        let mut out = vec![0.0; self.coeffs.len()];
        act_into(kind, &self.coeffs, &mut out, self.rows, self.cols);
        Self {
            coeffs: out,
            rows: self.rows,
            cols: self.cols,
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(self.shape_error(o));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            rows: self.rows,
            cols: self.cols,
        })
    }

    fn shape_error(&self, o: &Self) -> Error {
        Error::ShapeMismatch {
            expected: format!("shape {}x{}", self.rows, self.cols),
            got: format!("shape {}x{}", o.rows, o.cols),
        }
    }
}

impl JetRing for Jet2 {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }
    fn constant_like(&self, v: f64) -> Self {
        Self::constant(v, self.rows, self.cols)
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("jet shape mismatch")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("jet shape mismatch")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("jet shape mismatch")
    }
    fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }
    fn add_scalar(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }
}

/// Coordinate jets for a point perturbed along `v`: entry `i` is
/// `x_i + v_i * eps`.
pub fn coord_jets1(x: &[f64], v: &[f64], order: usize) -> Vec<Jet1> {
    x.iter()
        .zip(v)
        .map(|(&xi, &vi)| Jet1::variable(xi, vi, order))
        .collect()
}

/// Coordinate jets for a point perturbed along two directions.
pub fn coord_jets2(x: &[f64], v1: &[f64], v2: &[f64]) -> Vec<Jet2> {
    x.iter()
        .zip(v1.iter().zip(v2))
        .map(|(&xi, (&a, &b))| Jet2::variable(xi, a, b, 3, 3))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn jet(c: &[f64]) -> Jet1 {
        Jet1::new(c.to_vec()).unwrap()
    }

    #[test]
    fn add_is_coefficientwise() {
        let s = &jet(&[1.0, 2.0, 3.0]) + &jet(&[4.0, 5.0, 6.0]);
        assert_eq!(s.coeffs(), &[5.0, 7.0, 9.0]);
    }

    #[test]
    fn zero_jet_is_additive_identity() {
        let a = jet(&[0.3, -1.5, 2.0, 0.25]);
        let z = Jet1::constant(0.0, 3);
        assert_eq!((&a + &z).coeffs(), a.coeffs());
    }

    #[test]
    fn order_zero_reduces_to_real_arithmetic() {
        let a = jet(&[2.0]);
        let b = jet(&[3.0]);
        assert_eq!((&a + &b).coeffs(), &[5.0]);
        assert_eq!((&a * &b).coeffs(), &[6.0]);
    }

    #[test]
    fn mul_matches_symbolic_expansion() {
        // (1 + 2e + 3e^2)(4 + 5e + 6e^2) = 4 + 13e + 28e^2 + O(e^3)
        let p = &jet(&[1.0, 2.0, 3.0]) * &jet(&[4.0, 5.0, 6.0]);
        assert_eq!(p.coeffs(), &[4.0, 13.0, 28.0]);
    }

    #[test]
    fn mul_identity() {
        let a = jet(&[7.0, -2.0, 0.5]);
        let one = jet(&[1.0, 0.0, 0.0]);
        assert_eq!((&a * &one).coeffs(), a.coeffs());
    }

    #[test]
    fn mul_truncates() {
        let e = jet(&[0.0, 1.0]);
        assert_eq!((&e * &e).coeffs(), &[0.0, 0.0]);
    }

    #[test]
    fn order_mismatch_is_shape_error() {
        let a = jet(&[1.0, 2.0]);
        let b = jet(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn order_above_four_rejected() {
        assert!(Jet1::new(vec![0.0; 6]).is_err());
        assert!(Jet2::new(vec![0.0; 16], 4, 4).is_err());
    }

    #[test]
    fn requ_jet_at_positive_value() {
        // sigma(x) = x^2 on the active branch; at value 2 with slope 1 the
        // output is (4, sigma'(2) = 4).
        let out = jet(&[2.0, 1.0]).activate(ActivationKind::Requ);
        assert_eq!(out.coeffs(), &[4.0, 4.0]);
    }

    #[test]
    fn relu_dead_region_zeroes_everything() {
        let out = jet(&[-1.0, 3.0, -2.0]).activate(ActivationKind::Relu);
        assert_eq!(out.coeffs(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn kink_input_takes_zero_branch() {
        let out = jet(&[0.0, 1.0]).activate(ActivationKind::Relu);
        assert_eq!(out.coeffs(), &[0.0, 0.0]);
        let out = jet(&[0.0, 1.0]).activate(ActivationKind::Requ);
        assert_eq!(out.coeffs(), &[0.0, 0.0]);
    }

    #[test]
    fn recu_jet_matches_cubic_branch() {
        // x^3 at 2: value 8, derivative 12, half second derivative 6.
        let out = jet(&[2.0, 1.0, 0.0]).activate(ActivationKind::Recu);
        assert_eq!(out.coeffs(), &[8.0, 12.0, 6.0]);
    }

    #[test]
    fn sine_jet_coefficients() {
        let x = Jet1::variable(0.0, 1.0, 3);
        let s = x.sin();
        let expect = [0.0, 1.0, 0.0, -1.0 / 6.0];
        for (c, e) in s.coeffs().iter().zip(expect) {
            assert_relative_eq!(c, &e, epsilon = 1e-14);
        }
    }

    #[test]
    fn exp_jet_coefficients() {
        let x = Jet1::variable(0.0, 1.0, 4);
        let e = x.exp();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (c, want) in e.coeffs().iter().zip(expect) {
            assert_relative_eq!(c, &want, epsilon = 1e-14);
        }
    }

    #[test]
    fn jet2_marginals_match_jet1_bitwise() {
        // f(x) = (x + eps1)^2 * sin(x + eps1), second direction zeroed.
        let x = 0.7;
        let f2 = {
            let c = Jet2::variable(x, 1.0, 0.0, 3, 3);
            c.mul(&c).mul(&c.sin())
        };
        let f1 = {
            let c = Jet1::variable(x, 1.0, 2);
            c.mul(&c).mul(&c.sin())
        };
        for i in 0..3 {
            assert_eq!(f2.coeff(i, 0), f1.coeffs()[i], "marginal row {i}");
        }
        for i in 0..3 {
            for j in 1..3 {
                assert_eq!(f2.coeff(i, j), 0.0);
            }
        }
    }

    #[test]
    fn jet2_mixed_product_coefficients() {
        // f = (x + eps1)(x + eps2): coeff (1,1) must be 1, (2,*) zero.
        let a = Jet2::variable(2.0, 1.0, 0.0, 3, 3);
        let b = Jet2::variable(2.0, 0.0, 1.0, 3, 3);
        let f = a.mul(&b);
        assert_eq!(f.coeff(0, 0), 4.0);
        assert_eq!(f.coeff(1, 0), 2.0);
        assert_eq!(f.coeff(0, 1), 2.0);
        assert_eq!(f.coeff(1, 1), 1.0);
        assert_eq!(f.coeff(2, 0), 0.0);
        assert_eq!(f.coeff(2, 2), 0.0);
    }

    /// Differentiate the polynomial with coefficients `poly` (in x) k times
    /// and evaluate at x; independent of the jet kernels.
    fn poly_deriv_at(poly: &[f64], k: usize, x: f64) -> f64 {
        let mut acc = 0.0;
        for (deg, &c) in poly.iter().enumerate() {
            if deg >= k {
                let mut term = c;
                for j in 0..k {
                    term *= (deg - j) as f64;
                }
                acc += term * x.powi((deg - k) as i32);
            }
        }
        acc
    }

    fn eval_poly_jet(poly: &[f64], x: &Jet1) -> Jet1 {
        let mut acc = x.constant_like(0.0);
        for &c in poly.iter().rev() {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }

    proptest! {
        #[test]
        fn jet_product_agrees_with_symbolic_differentiation(
            coeffs in proptest::collection::vec(-2.0f64..2.0, 5),
            x in -1.5f64..1.5,
        ) {
            let xj = Jet1::variable(x, 1.0, 4);
            let f = eval_poly_jet(&coeffs, &xj);
            for k in 0..=4 {
                let want = poly_deriv_at(&coeffs, k, x);
                let got = f.derivative(k);
                prop_assert!(
                    (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                    "k={k}: got {got}, want {want}"
                );
            }
        }

        #[test]
        fn jet_sum_linearity(
            a in proptest::collection::vec(-5.0f64..5.0, 4),
            b in proptest::collection::vec(-5.0f64..5.0, 4),
        ) {
            let s = &jet(&a) + &jet(&b);
            for i in 0..4 {
                prop_assert_eq!(s.coeffs()[i], a[i] + b[i]);
            }
        }
    }
}
