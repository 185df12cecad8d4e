//! Higher-order input derivatives (forward jets) composed with a
//! reverse-mode tape (parameter gradients).

pub mod jet;
pub mod tape;

pub use jet::{Jet1, Jet2, JetRing};
pub use tape::{Adjoint, NodeId, Tape};

use crate::error::{Error, Result};
use crate::network::NetworkEval;

/// How a forward pass perturbs its input point.
#[derive(Debug, Clone, Copy)]
pub enum JetSeed<'a> {
    /// Plain values, no perturbation.
    Value,
    /// One direction, Taylor order `order <= 4`.
    Dir1 { dir: &'a [f64], order: usize },
    /// Two directions at order (2, 2).
    Dir2 { dir1: &'a [f64], dir2: &'a [f64] },
}

impl JetSeed<'_> {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            JetSeed::Value => (1, 1),
            JetSeed::Dir1 { order, .. } => (order + 1, 1),
            JetSeed::Dir2 { .. } => (3, 3),
        }
    }

    pub fn width(&self) -> usize {
        let (r, c) = self.shape();
        r * c
    }

    pub fn validate(&self) -> Result<()> {
        if let JetSeed::Dir1 { order, .. } = self {
            if *order > jet::MAX_ORDER1 {
                return Err(Error::UnsupportedOrder {
                    order: *order,
                    max: jet::MAX_ORDER1,
                });
            }
        }
        Ok(())
    }

    /// Writes the coefficient grid of coordinate `j` for every input
    /// coordinate into `out` (row-major, `width` coefficients per coord).
    pub(crate) fn write_coords(&self, x: &[f64], width: usize, out: &mut [f64]) {
        match self {
            JetSeed::Value => {
                for (j, &xj) in x.iter().enumerate() {
                    out[j] = xj;
                }
            }
            JetSeed::Dir1 { dir, order } => {
                let w = order + 1;
                debug_assert_eq!(w, width);
                for (j, &xj) in x.iter().enumerate() {
                    out[j * w] = xj;
                    if *order >= 1 {
                        out[j * w + 1] = dir[j];
                    }
                }
            }
            JetSeed::Dir2 { dir1, dir2 } => {
                for (j, &xj) in x.iter().enumerate() {
                    out[j * 9] = xj;
                    out[j * 9 + 3] = dir1[j];
                    out[j * 9 + 1] = dir2[j];
                }
            }
        }
    }

    /// Records coordinate `j` of point `x` as a constant jet node.
    pub(crate) fn record_coord(
        &self,
        tape: &mut Tape,
        xj: f64,
        j: usize,
        rows: usize,
        cols: usize,
    ) -> NodeId {
        match self {
            JetSeed::Value => tape.constant(xj),
            JetSeed::Dir1 { dir, order } => {
                let mut coeffs = [0.0; 5];
                coeffs[0] = xj;
                if *order >= 1 {
                    coeffs[1] = dir[j];
                }
                tape.const_jet1(&coeffs[..rows])
            }
            JetSeed::Dir2 { dir1, dir2 } => {
                let mut coeffs = [0.0; 9];
                coeffs[0] = xj;
                coeffs[3] = dir1[j];
                coeffs[1] = dir2[j];
                tape.const_jet2(&coeffs, rows, cols)
            }
        }
    }
}

/// A scalar field that can be evaluated as jets: neural approximations and
/// analytic expressions share this surface so derivative operators and
/// their oracles run through identical plumbing.
pub trait JetField {
    fn dim(&self) -> usize;
    fn jet1(&self, x: &[f64], dir: &[f64], order: usize) -> Result<Jet1>;
    fn jet2(&self, x: &[f64], dir1: &[f64], dir2: &[f64]) -> Result<Jet2>;
}

impl JetField for NetworkEval<'_> {
    fn dim(&self) -> usize {
        self.spec.input_dim
    }

    fn jet1(&self, x: &[f64], dir: &[f64], order: usize) -> Result<Jet1> {
        assert_eq!(self.spec.output_dim, 1, "JetField requires a scalar network");
        Ok(self.forward_jet1(x, dir, order)?.remove(0))
    }

    fn jet2(&self, x: &[f64], dir1: &[f64], dir2: &[f64]) -> Result<Jet2> {
        assert_eq!(self.spec.output_dim, 1, "JetField requires a scalar network");
        let seed = JetSeed::Dir2 { dir1, dir2 };
        let mut ws = crate::network::JetWorkspace::default();
        let mut out = Vec::new();
        self.forward_jets(x, &seed, &mut ws, &mut out)?;
        Jet2::new(out, 3, 3)
    }
}

/// Expression-defined scalar field, written once against [`JetRing`] and
/// evaluated at whatever jet shape a derivative operator needs.
pub trait RingField {
    fn dim(&self) -> usize;
    fn eval<R: JetRing>(&self, x: &[R]) -> R;
}

/// Adapter turning a [`RingField`] into a [`JetField`].
pub struct Analytic<T>(pub T);

impl<T: RingField> JetField for Analytic<T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn jet1(&self, x: &[f64], dir: &[f64], order: usize) -> Result<Jet1> {
        JetSeed::Dir1 { dir, order }.validate()?;
        Ok(self.0.eval(&jet::coord_jets1(x, dir, order)))
    }

    fn jet2(&self, x: &[f64], dir1: &[f64], dir2: &[f64]) -> Result<Jet2> {
        Ok(self.0.eval(&jet::coord_jets2(x, dir1, dir2)))
    }
}

fn basis(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// `f(x)` and its directional derivatives `d^k f / d eps^k`, `k = 0..=order`,
/// along `v`.
pub fn directional_derivs(
    f: &impl JetField,
    x: &[f64],
    v: &[f64],
    order: usize,
) -> Result<Vec<f64>> {
    if order > jet::MAX_ORDER1 {
        return Err(Error::UnsupportedOrder {
            order,
            max: jet::MAX_ORDER1,
        });
    }
    let j = f.jet1(x, v, order)?;
    Ok((0..=order).map(|k| j.derivative(k)).collect())
}

/// Trace of the Hessian: the sum of second directional derivatives along
/// every coordinate axis.
pub fn laplacian(f: &impl JetField, x: &[f64]) -> Result<f64> {
    let d = f.dim();
    let mut acc = 0.0;
    for i in 0..d {
        acc += directional_derivs(f, x, &basis(d, i), 2)?[2];
    }
    Ok(acc)
}

/// `sum_{i,j} d^4 f / dx_i^2 dx_j^2`, assembled from one order-(2,2) jet
/// per unordered axis pair — `d(d+1)/2` evaluations.
pub fn bilaplacian(f: &impl JetField, x: &[f64]) -> Result<f64> {
    let d = f.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in i..d {
            let jj = f.jet2(x, &basis(d, i), &basis(d, j))?;
            let weight = if i == j { 1.0 } else { 2.0 };
            acc += weight * jj.derivative(2, 2);
        }
    }
    Ok(acc)
}

/// Tape-recorded Laplacian of a scalar network output; the returned node
/// stays parameter-differentiable.
pub fn laplacian_on_tape(tape: &mut Tape, eval: &NetworkEval, x: &[f64]) -> NodeId {
    assert_eq!(eval.spec.output_dim, 1, "laplacian requires a scalar network");
    let d = eval.spec.input_dim;
    let mut dir = vec![0.0; d];
    let mut terms = Vec::with_capacity(d);
    for i in 0..d {
        dir[i] = 1.0;
        let seed = JetSeed::Dir1 { dir: &dir, order: 2 };
        let nodes = eval.forward_on_tape(tape, x, &seed);
        terms.push(tape.extract(nodes[0], 2, 0));
        dir[i] = 0.0;
    }
    tape.sum(&terms)
}

/// Tape-recorded bilaplacian of a scalar network output.
pub fn bilaplacian_on_tape(tape: &mut Tape, eval: &NetworkEval, x: &[f64]) -> NodeId {
    assert_eq!(eval.spec.output_dim, 1, "bilaplacian requires a scalar network");
    let d = eval.spec.input_dim;
    let mut d1 = vec![0.0; d];
    let mut d2 = vec![0.0; d];
    let mut terms = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            d1[i] = 1.0;
            d2[j] = 1.0;
            let seed = JetSeed::Dir2 {
                dir1: &d1,
                dir2: &d2,
            };
            let nodes = eval.forward_on_tape(tape, x, &seed);
            let mixed = tape.extract(nodes[0], 2, 2);
            terms.push(if i == j { mixed } else { tape.scale(mixed, 2.0) });
            d1[i] = 0.0;
            d2[j] = 0.0;
        }
    }
    tape.sum(&terms)
}
