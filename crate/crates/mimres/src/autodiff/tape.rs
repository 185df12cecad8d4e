//! Reverse-mode tape over jet-valued scalars.
//!
//! Every node carries the truncated Taylor coefficients of one scalar
//! quantity along the input perturbation chosen when the expression was
//! recorded (reverse-over-forward). Backward propagates adjoints per
//! coefficient, so the parameter gradient of any recorded scalar — in
//! particular of input-derivative quantities read off via [`Tape::extract`]
//! — is exact.
//!
//! Values are computed eagerly while recording; the tape is append-only and
//! parents always precede their children. Affine nodes read weights
//! directly from the bound parameter slice instead of going through leaf
//! nodes, which keeps network forwards compact.

use crate::autodiff::jet::{act_deriv_into, act_into, conv_into, corr_acc, FACTORIALS, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::network::ActivationKind;

/// Handle to a recorded node. Only meaningful on the tape that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId(u32);

/// Parameter gradient produced by [`Tape::backward`]. Entries for
/// parameters unreachable from the root are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjoint {
    pub gradient: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
enum OpKind {
    Const,
    Param,
    Add,
    Sub,
    Mul,
    Neg,
    Scale,
    Act,
    Affine,
    Extract,
    Sum,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    kind: OpKind,
    rows: u8,
    cols: u8,
    a: u32,
    b: u32,
    c: u32,
    val: u32,
}

const NO_BIAS: u32 = u32::MAX;

/// Reverse-mode computation graph bound to one flat parameter slice.
pub struct Tape<'p> {
    params: &'p [f64],
    nodes: Vec<Node>,
    vals: Vec<f64>,
    /// Length-prefixed parent lists for `Affine` and `Sum` nodes.
    args: Vec<u32>,
    consts: Vec<f64>,
}

impl<'p> Tape<'p> {
    pub fn new(params: &'p [f64]) -> Self {
        Self {
            params,
            nodes: Vec::new(),
            vals: Vec::new(),
            args: Vec::new(),
            consts: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// Jet shape `(rows, cols)` of a node.
    pub fn shape(&self, id: NodeId) -> (usize, usize) {
        let n = &self.nodes[id.0 as usize];
        (n.rows as usize, n.cols as usize)
    }

    /// All Taylor coefficients of a node.
    pub fn coeffs(&self, id: NodeId) -> &[f64] {
        let n = &self.nodes[id.0 as usize];
        let w = n.rows as usize * n.cols as usize;
        &self.vals[n.val as usize..n.val as usize + w]
    }

    /// Plain value (coefficient 0) of a node.
    pub fn value(&self, id: NodeId) -> f64 {
        self.vals[self.nodes[id.0 as usize].val as usize]
    }

    fn push(&mut self, kind: OpKind, rows: usize, cols: usize, a: u32, b: u32, c: u32) -> NodeId {
        let val = self.vals.len() as u32;
        self.vals.resize(self.vals.len() + rows * cols, 0.0);
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            kind,
            rows: rows as u8,
            cols: cols as u8,
            a,
            b,
            c,
            val,
        });
        NodeId(id)
    }

    fn node(&self, id: NodeId) -> Node {
        self.nodes[id.0 as usize]
    }

    // -- leaves ------------------------------------------------------------

    /// Scalar constant (order-0 jet).
    pub fn constant(&mut self, v: f64) -> NodeId {
        let id = self.push(OpKind::Const, 1, 1, 0, 0, 0);
        let off = self.node(id).val as usize;
        self.vals[off] = v;
        id
    }

    /// Constant jet along one direction.
    pub fn const_jet1(&mut self, coeffs: &[f64]) -> NodeId {
        let id = self.push(OpKind::Const, coeffs.len(), 1, 0, 0, 0);
        let off = self.node(id).val as usize;
        self.vals[off..off + coeffs.len()].copy_from_slice(coeffs);
        id
    }

    /// Constant jet along two directions, row-major `rows x cols`.
    pub fn const_jet2(&mut self, coeffs: &[f64], rows: usize, cols: usize) -> NodeId {
        assert_eq!(coeffs.len(), rows * cols, "coefficient grid size");
        let id = self.push(OpKind::Const, rows, cols, 0, 0, 0);
        let off = self.node(id).val as usize;
        self.vals[off..off + coeffs.len()].copy_from_slice(coeffs);
        id
    }

    /// Leaf bound to one entry of the parameter slice.
    pub fn param(&mut self, index: usize) -> Result<NodeId> {
        if index >= self.params.len() {
            return Err(Error::UnboundParam {
                index,
                len: self.params.len(),
            });
        }
        let id = self.push(OpKind::Param, 1, 1, index as u32, 0, 0);
        let off = self.node(id).val as usize;
        self.vals[off] = self.params[index];
        Ok(id)
    }

    // -- arithmetic ---------------------------------------------------------

    fn same_shape(&self, a: NodeId, b: NodeId) -> (usize, usize) {
        let (na, nb) = (self.node(a), self.node(b));
        assert!(
            na.rows == nb.rows && na.cols == nb.cols,
            "tape op on mismatched jet shapes {}x{} vs {}x{}",
            na.rows,
            na.cols,
            nb.rows,
            nb.cols
        );
        (na.rows as usize, na.cols as usize)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (rows, cols) = self.same_shape(a, b);
        let id = self.push(OpKind::Add, rows, cols, a.0, b.0, 0);
        let (oa, ob, oo) = (
            self.node(a).val as usize,
            self.node(b).val as usize,
            self.node(id).val as usize,
        );
        for k in 0..rows * cols {
            self.vals[oo + k] = self.vals[oa + k] + self.vals[ob + k];
        }
        id
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (rows, cols) = self.same_shape(a, b);
        let id = self.push(OpKind::Sub, rows, cols, a.0, b.0, 0);
        let (oa, ob, oo) = (
            self.node(a).val as usize,
            self.node(b).val as usize,
            self.node(id).val as usize,
        );
        for k in 0..rows * cols {
            self.vals[oo + k] = self.vals[oa + k] - self.vals[ob + k];
        }
        id
    }

    /// Truncated jet product.
    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (rows, cols) = self.same_shape(a, b);
        let id = self.push(OpKind::Mul, rows, cols, a.0, b.0, 0);
        let (oa, ob, oo) = (
            self.node(a).val as usize,
            self.node(b).val as usize,
            self.node(id).val as usize,
        );
        let mut out = [0.0; MAX_WIDTH];
        conv_into(
            &self.vals[oa..oa + rows * cols],
            &self.vals[ob..ob + rows * cols],
            &mut out[..rows * cols],
            rows,
            cols,
        );
        self.vals[oo..oo + rows * cols].copy_from_slice(&out[..rows * cols]);
        id
    }

    pub fn square(&mut self, a: NodeId) -> NodeId {
        self.mul(a, a)
    }

    pub fn neg(&mut self, a: NodeId) -> NodeId {
        let n = self.node(a);
        let (rows, cols) = (n.rows as usize, n.cols as usize);
        let id = self.push(OpKind::Neg, rows, cols, a.0, 0, 0);
        let (oa, oo) = (n.val as usize, self.node(id).val as usize);
        for k in 0..rows * cols {
            self.vals[oo + k] = -self.vals[oa + k];
        }
        id
    }

    pub fn scale(&mut self, a: NodeId, k: f64) -> NodeId {
        let n = self.node(a);
        let (rows, cols) = (n.rows as usize, n.cols as usize);
        let cidx = self.consts.len() as u32;
        self.consts.push(k);
        let id = self.push(OpKind::Scale, rows, cols, a.0, cidx, 0);
        let (oa, oo) = (n.val as usize, self.node(id).val as usize);
        for i in 0..rows * cols {
            self.vals[oo + i] = k * self.vals[oa + i];
        }
        id
    }

    /// Activation composed through the jet.
    pub fn activation(&mut self, a: NodeId, kind: ActivationKind) -> NodeId {
        let n = self.node(a);
        let (rows, cols) = (n.rows as usize, n.cols as usize);
        let id = self.push(OpKind::Act, rows, cols, a.0, kind as u32, 0);
        let (oa, oo) = (n.val as usize, self.node(id).val as usize);
        let mut out = [0.0; MAX_WIDTH];
        act_into(
            kind,
            &self.vals[oa..oa + rows * cols],
            &mut out[..rows * cols],
            rows,
            cols,
        );
        self.vals[oo..oo + rows * cols].copy_from_slice(&out[..rows * cols]);
        id
    }

    /// Fused dot product against a contiguous weight row plus optional bias:
    /// `sum_j params[w_off + j] * parents[j] (+ params[bias])`.
    ///
    /// Panics if the referenced parameters are out of bounds or parent
    /// shapes disagree.
    pub fn affine(&mut self, parents: &[NodeId], w_off: usize, bias: Option<usize>) -> NodeId {
        assert!(!parents.is_empty(), "affine needs at least one input");
        assert!(
            w_off + parents.len() <= self.params.len(),
            "affine weight row out of bounds"
        );
        let n0 = self.node(parents[0]);
        let (rows, cols) = (n0.rows as usize, n0.cols as usize);
        let width = rows * cols;
        let args_off = self.args.len() as u32;
        self.args.push(parents.len() as u32);
        for p in parents {
            let np = self.node(*p);
            assert!(
                np.rows as usize == rows && np.cols as usize == cols,
                "affine parents must share one jet shape"
            );
            self.args.push(p.0);
        }
        let bias_idx = match bias {
            Some(b) => {
                assert!(b < self.params.len(), "affine bias out of bounds");
                b as u32
            }
            None => NO_BIAS,
        };
        let id = self.push(OpKind::Affine, rows, cols, args_off, w_off as u32, bias_idx);
        let oo = self.node(id).val as usize;
        let mut out = [0.0; MAX_WIDTH];
        for (j, p) in parents.iter().enumerate() {
            let w = self.params[w_off + j];
            let op = self.node(*p).val as usize;
            for k in 0..width {
                out[k] += w * self.vals[op + k];
            }
        }
        if bias_idx != NO_BIAS {
            out[0] += self.params[bias_idx as usize];
        }
        self.vals[oo..oo + width].copy_from_slice(&out[..width]);
        id
    }

    /// N-ary sum of equally shaped nodes.
    pub fn sum(&mut self, terms: &[NodeId]) -> NodeId {
        assert!(!terms.is_empty(), "sum needs at least one term");
        let n0 = self.node(terms[0]);
        let (rows, cols) = (n0.rows as usize, n0.cols as usize);
        let width = rows * cols;
        let args_off = self.args.len() as u32;
        self.args.push(terms.len() as u32);
        for t in terms {
            let nt = self.node(*t);
            assert!(
                nt.rows as usize == rows && nt.cols as usize == cols,
                "sum terms must share one jet shape"
            );
            self.args.push(t.0);
        }
        let id = self.push(OpKind::Sum, rows, cols, args_off, 0, 0);
        let oo = self.node(id).val as usize;
        let mut out = [0.0; MAX_WIDTH];
        for t in terms {
            let ot = self.node(*t).val as usize;
            for k in 0..width {
                out[k] += self.vals[ot + k];
            }
        }
        self.vals[oo..oo + width].copy_from_slice(&out[..width]);
        id
    }

    /// Scalar node holding the mixed derivative `i! j! * c_{ij}` of `a`.
    /// For a single-direction jet use `j = 0`.
    pub fn extract(&mut self, a: NodeId, i: usize, j: usize) -> NodeId {
        let n = self.node(a);
        assert!(
            i < n.rows as usize && j < n.cols as usize,
            "extract index ({i},{j}) outside jet shape {}x{}",
            n.rows,
            n.cols
        );
        let id = self.push(OpKind::Extract, 1, 1, a.0, (i | (j << 8)) as u32, 0);
        let oo = self.node(id).val as usize;
        self.vals[oo] =
            self.vals[n.val as usize + i * n.cols as usize + j] * FACTORIALS[i] * FACTORIALS[j];
        id
    }

    // -- backward ------------------------------------------------------------

    /// Exact reverse-mode gradient of a recorded scalar with respect to all
    /// bound parameters. Deterministic: the same tape always yields
    /// bitwise-identical adjoints.
    pub fn backward(&self, root: NodeId) -> Result<Adjoint> {
        let ridx = root.0 as usize;
        if ridx >= self.nodes.len() {
            return Err(Error::UnknownNode);
        }
        let rn = self.nodes[ridx];
        if rn.rows != 1 || rn.cols != 1 {
            return Err(Error::NonScalarRoot);
        }
        let mut adj = vec![0.0; self.vals.len()];
        let mut grad = vec![0.0; self.params.len()];
        adj[rn.val as usize] = 1.0;

        let mut abuf = [0.0; MAX_WIDTH];
        let mut dbuf = [0.0; MAX_WIDTH];
        for idx in (0..=ridx).rev() {
            let n = self.nodes[idx];
            let (rows, cols) = (n.rows as usize, n.cols as usize);
            let width = rows * cols;
            let ov = n.val as usize;
            abuf[..width].copy_from_slice(&adj[ov..ov + width]);
            if abuf[..width].iter().all(|&x| x == 0.0) {
                continue;
            }
            match n.kind {
                OpKind::Const => {}
                OpKind::Param => grad[n.a as usize] += abuf[0],
                OpKind::Add => {
                    let (pa, pb) = (self.nodes[n.a as usize].val, self.nodes[n.b as usize].val);
                    for k in 0..width {
                        adj[pa as usize + k] += abuf[k];
                    }
                    for k in 0..width {
                        adj[pb as usize + k] += abuf[k];
                    }
                }
                OpKind::Sub => {
                    let (pa, pb) = (self.nodes[n.a as usize].val, self.nodes[n.b as usize].val);
                    for k in 0..width {
                        adj[pa as usize + k] += abuf[k];
                    }
                    for k in 0..width {
                        adj[pb as usize + k] -= abuf[k];
                    }
                }
                OpKind::Mul => {
                    let (na, nb) = (self.nodes[n.a as usize], self.nodes[n.b as usize]);
                    let (oa, ob) = (na.val as usize, nb.val as usize);
                    // d(conv)/dA correlates the adjoint with B and vice versa.
                    corr_acc(
                        &abuf[..width],
                        &self.vals[ob..ob + width],
                        &mut adj[oa..oa + width],
                        rows,
                        cols,
                    );
                    corr_acc(
                        &abuf[..width],
                        &self.vals[oa..oa + width],
                        &mut adj[ob..ob + width],
                        rows,
                        cols,
                    );
                }
                OpKind::Neg => {
                    let pa = self.nodes[n.a as usize].val as usize;
                    for k in 0..width {
                        adj[pa + k] -= abuf[k];
                    }
                }
                OpKind::Scale => {
                    let pa = self.nodes[n.a as usize].val as usize;
                    let k0 = self.consts[n.b as usize];
                    for k in 0..width {
                        adj[pa + k] += k0 * abuf[k];
                    }
                }
                OpKind::Act => {
                    let na = self.nodes[n.a as usize];
                    let oa = na.val as usize;
                    let kind = ActivationKind::from_u32(n.b);
                    act_deriv_into(
                        kind,
                        &self.vals[oa..oa + width],
                        &mut dbuf[..width],
                        rows,
                        cols,
                    );
                    corr_acc(
                        &abuf[..width],
                        &dbuf[..width],
                        &mut adj[oa..oa + width],
                        rows,
                        cols,
                    );
                }
                OpKind::Affine => {
                    let count = self.args[n.a as usize] as usize;
                    let w_off = n.b as usize;
                    for j in 0..count {
                        let pid = self.args[n.a as usize + 1 + j] as usize;
                        let op = self.nodes[pid].val as usize;
                        let w = self.params[w_off + j];
                        let mut wg = 0.0;
                        for k in 0..width {
                            adj[op + k] += w * abuf[k];
                            wg += abuf[k] * self.vals[op + k];
                        }
                        grad[w_off + j] += wg;
                    }
                    if n.c != NO_BIAS {
                        grad[n.c as usize] += abuf[0];
                    }
                }
                OpKind::Extract => {
                    let na = self.nodes[n.a as usize];
                    let (i, j) = ((n.b & 0xff) as usize, (n.b >> 8) as usize);
                    adj[na.val as usize + i * na.cols as usize + j] +=
                        abuf[0] * FACTORIALS[i] * FACTORIALS[j];
                }
                OpKind::Sum => {
                    let count = self.args[n.a as usize] as usize;
                    for j in 0..count {
                        let pid = self.args[n.a as usize + 1 + j] as usize;
                        let op = self.nodes[pid].val as usize;
                        for k in 0..width {
                            adj[op + k] += abuf[k];
                        }
                    }
                }
            }
        }
        Ok(Adjoint { gradient: grad })
    }
}
