//! ResNet approximator with jet-valued forward evaluation.
//!
//! The network is a stack of `m` residual blocks over a width-`n` state.
//! A learned affine map takes the input into the state space and doubles
//! as the first block's inner layer; every later block applies two affine
//! layers with activations and a shortcut:
//!
//! ```text
//! h   = W_in x + b_in
//! s_1 = sigma(W_{2,1} sigma(h) + b_{2,1}) + h
//! s_k = sigma(W_{2,k} sigma(W_{1,k} s_{k-1} + b_{1,k}) + b_{2,k}) + s_{k-1}
//! out = T s_m + b_out
//! ```
//!
//! With this arrangement the trainable-parameter total is
//! `(2m-1) n^2 + (input_dim + 2m) n + output_dim (n + 1)`.

use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;

use crate::autodiff::jet::{act_into, Jet1};
use crate::autodiff::{JetSeed, NodeId, Tape};
use crate::error::{Error, Result};
use crate::losses::{MethodKind, VariantKind};
use crate::problems::ProblemKind;

/// Scalar activation applied throughout a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum ActivationKind {
    /// `x^2`
    Square = 0,
    /// `max(x, 0)`
    Relu = 1,
    /// `max(x, 0)^2`
    Requ = 2,
    /// `max(x, 0)^3`
    Recu = 3,
}

impl ActivationKind {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            ActivationKind::Square => x * x,
            ActivationKind::Relu => x.max(0.0),
            ActivationKind::Requ => {
                let r = x.max(0.0);
                r * r
            }
            ActivationKind::Recu => {
                let r = x.max(0.0);
                r * r * r
            }
        }
    }

    pub(crate) fn from_u32(v: u32) -> Self {
        match v {
            0 => ActivationKind::Square,
            1 => ActivationKind::Relu,
            2 => ActivationKind::Requ,
            3 => ActivationKind::Recu,
            _ => unreachable!("invalid activation id {v}"),
        }
    }

    /// Input-derivative order beyond which the composed network is
    /// identically zero on activation branches, if any. Piecewise-linear
    /// ReLU kills every derivative past the first; the polynomial units
    /// gain degree through composition and are unrestricted.
    pub fn zero_beyond_order(self) -> Option<usize> {
        match self {
            ActivationKind::Relu => Some(1),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Square => "square",
            ActivationKind::Relu => "relu",
            ActivationKind::Requ => "requ",
            ActivationKind::Recu => "recu",
        }
    }
}

impl std::str::FromStr for ActivationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(ActivationKind::Square),
            "relu" => Ok(ActivationKind::Relu),
            "requ" => Ok(ActivationKind::Requ),
            "recu" => Ok(ActivationKind::Recu),
            other => Err(Error::InvalidConfig(format!(
                "unknown activation '{other}' (expected square|relu|requ|recu)"
            ))),
        }
    }
}

/// Shape of one ResNet: depth (blocks), width, input/output dims, activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkSpec {
    pub depth: usize,
    pub width: usize,
    pub input_dim: usize,
    pub output_dim: usize,
    pub activation: ActivationKind,
}

/// Offsets of every parameter segment inside the flat vector.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub w_in: usize,
    pub b_in: usize,
    /// `(w1, b1, w2, b2)` per block; block 1 has no first layer of its own.
    pub blocks: Vec<(Option<usize>, Option<usize>, usize, usize)>,
    pub t: usize,
    pub b_out: usize,
    pub total: usize,
}

impl NetworkSpec {
    pub fn new(
        depth: usize,
        width: usize,
        input_dim: usize,
        output_dim: usize,
        activation: ActivationKind,
    ) -> Result<Self> {
        if depth == 0 || width == 0 || input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidConfig(
                "network depth, width and dimensions must be positive".into(),
            ));
        }
        Ok(Self {
            depth,
            width,
            input_dim,
            output_dim,
            activation,
        })
    }

    /// Total number of trainable parameters.
    pub fn param_count(&self) -> usize {
        self.layout().total
    }

    pub(crate) fn layout(&self) -> Layout {
        let (m, n) = (self.depth, self.width);
        let w_in = 0;
        let b_in = n * self.input_dim;
        let mut cur = b_in + n;
        let mut blocks = Vec::with_capacity(m);
        blocks.push((None, None, cur, cur + n * n));
        cur += n * n + n;
        for _ in 1..m {
            blocks.push((Some(cur), Some(cur + n * n), cur + n * n + n, cur + 2 * n * n + n));
            cur += 2 * (n * n + n);
        }
        let t = cur;
        let b_out = t + self.output_dim * n;
        Layout {
            w_in,
            b_in,
            blocks,
            t,
            b_out,
            total: b_out + self.output_dim,
        }
    }
}

/// Flat trainable-parameter storage for one or more networks.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    data: Vec<f64>,
}

impl ParamVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![0.0; len],
        }
    }

    pub fn from_vec(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Fan-in uniform initialization: weights on `[-sqrt(1/fan_in), sqrt(1/fan_in)]`,
/// biases zero. Deterministic for a given generator state.
pub fn init_params(spec: &NetworkSpec, rng: &mut impl Rng) -> ParamVector {
    let l = spec.layout();
    let (n, d_in, d_out) = (spec.width, spec.input_dim, spec.output_dim);
    let mut v = vec![0.0; l.total];
    let mut fill = |v: &mut [f64], off: usize, count: usize, fan_in: usize, rng: &mut dyn rand::RngCore| {
        let a = (1.0 / fan_in as f64).sqrt();
        for slot in &mut v[off..off + count] {
            *slot = rng.gen_range(-a..=a);
        }
    };
    fill(&mut v, l.w_in, n * d_in, d_in, rng);
    for &(w1, _, w2, _) in &l.blocks {
        if let Some(w1) = w1 {
            fill(&mut v, w1, n * n, n, rng);
        }
        fill(&mut v, w2, n * n, n, rng);
    }
    fill(&mut v, l.t, d_out * n, n, rng);
    ParamVector::from_vec(v)
}

// ---------------------------------------------------------------------------
// Forward evaluation
// ---------------------------------------------------------------------------

/// Immutable binding of a [`NetworkSpec`] to its slice of a flat parameter
/// array. `base` is the slice's offset within the full array a [`Tape`] is
/// bound to, so multi-network models can share one tape and one gradient.
#[derive(Clone, Copy)]
pub struct NetworkEval<'a> {
    pub spec: &'a NetworkSpec,
    params: &'a [f64],
    base: usize,
}

/// Reusable coefficient buffers for jet-valued forwards.
#[derive(Default)]
pub struct JetWorkspace {
    state: Vec<f64>,
    pre: Vec<f64>,
    act: Vec<f64>,
    input: Vec<f64>,
}

impl<'a> NetworkEval<'a> {
    /// Binds a spec to a standalone parameter vector.
    pub fn new(spec: &'a NetworkSpec, params: &'a ParamVector) -> Self {
        assert_eq!(params.len(), spec.param_count(), "parameter vector length");
        Self {
            spec,
            params: params.as_slice(),
            base: 0,
        }
    }

    /// Binds a spec to `full[base..base + param_count]`.
    pub fn with_base(spec: &'a NetworkSpec, full: &'a [f64], base: usize) -> Self {
        assert!(base + spec.param_count() <= full.len(), "base out of range");
        Self {
            spec,
            params: full,
            base,
        }
    }

    #[inline]
    fn p(&self, local: usize) -> f64 {
        self.params[self.base + local]
    }

    /// Plain real-valued forward pass.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let spec = self.spec;
        if x.len() != spec.input_dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{} input coordinates", spec.input_dim),
                got: format!("{}", x.len()),
            });
        }
        let n = spec.width;
        let l = spec.layout();
        let sigma = spec.activation;

        let mut h = vec![0.0; n];
        for r in 0..n {
            let mut acc = self.p(l.b_in + r);
            for (j, &xj) in x.iter().enumerate() {
                acc += self.p(l.w_in + r * spec.input_dim + j) * xj;
            }
            h[r] = acc;
        }
        let mut state = h.clone();
        let mut pre = vec![0.0; n];
        for (bi, &(w1, b1, w2, b2)) in l.blocks.iter().enumerate() {
            let inner: Vec<f64> = if bi == 0 {
                h.iter().map(|&v| sigma.apply(v)).collect()
            } else {
                let (w1, b1) = (w1.unwrap(), b1.unwrap());
                (0..n)
                    .map(|r| {
                        let mut acc = self.p(b1 + r);
                        for j in 0..n {
                            acc += self.p(w1 + r * n + j) * state[j];
                        }
                        sigma.apply(acc)
                    })
                    .collect()
            };
            for r in 0..n {
                let mut acc = self.p(b2 + r);
                for j in 0..n {
                    acc += self.p(w2 + r * n + j) * inner[j];
                }
                pre[r] = acc;
            }
            for r in 0..n {
                state[r] = sigma.apply(pre[r]) + state[r];
            }
        }
        let mut out = vec![0.0; spec.output_dim];
        for (o, slot) in out.iter_mut().enumerate() {
            let mut acc = self.p(l.b_out + o);
            for j in 0..n {
                acc += self.p(l.t + o * n + j) * state[j];
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Jet-valued forward pass without a tape. Writes `output_dim * width`
    /// coefficients into `out` (row per output), where `width` is the
    /// coefficient count of `seed`.
    pub fn forward_jets(
        &self,
        x: &[f64],
        seed: &JetSeed,
        ws: &mut JetWorkspace,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        let spec = self.spec;
        if x.len() != spec.input_dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{} input coordinates", spec.input_dim),
                got: format!("{}", x.len()),
            });
        }
        seed.validate()?;
        let (rows, cols) = seed.shape();
        let w = rows * cols;
        let n = spec.width;
        let l = spec.layout();
        let sigma = spec.activation;

        ws.input.clear();
        ws.input.resize(spec.input_dim * w, 0.0);
        seed.write_coords(x, w, &mut ws.input);

        ws.state.clear();
        ws.state.resize(n * w, 0.0);
        ws.pre.clear();
        ws.pre.resize(n * w, 0.0);
        ws.act.clear();
        ws.act.resize(n * w, 0.0);

        // input affine, kept around as the first shortcut
        let mut hbuf = vec![0.0; n * w];
        affine_rows(
            self.params,
            self.base + l.w_in,
            Some(self.base + l.b_in),
            &ws.input,
            spec.input_dim,
            n,
            w,
            &mut hbuf,
        );
        ws.state.copy_from_slice(&hbuf);

        for (bi, &(w1, b1, w2, b2)) in l.blocks.iter().enumerate() {
            if bi == 0 {
                for r in 0..n {
                    act_into(sigma, &hbuf[r * w..(r + 1) * w], &mut ws.act[r * w..(r + 1) * w], rows, cols);
                }
            } else {
                affine_rows(
                    self.params,
                    self.base + w1.unwrap(),
                    Some(self.base + b1.unwrap()),
                    &ws.state,
                    n,
                    n,
                    w,
                    &mut ws.pre,
                );
                for r in 0..n {
                    act_into(sigma, &ws.pre[r * w..(r + 1) * w], &mut ws.act[r * w..(r + 1) * w], rows, cols);
                }
            }
            affine_rows(
                self.params,
                self.base + w2,
                Some(self.base + b2),
                &ws.act,
                n,
                n,
                w,
                &mut ws.pre,
            );
            for r in 0..n {
                let mut buf = [0.0; crate::autodiff::jet::MAX_WIDTH];
                act_into(sigma, &ws.pre[r * w..(r + 1) * w], &mut buf[..w], rows, cols);
                for k in 0..w {
                    ws.state[r * w + k] += buf[k];
                }
            }
        }

        out.clear();
        out.resize(spec.output_dim * w, 0.0);
        affine_rows(
            self.params,
            self.base + l.t,
            Some(self.base + l.b_out),
            &ws.state,
            n,
            spec.output_dim,
            w,
            out,
        );
        Ok(())
    }

    /// Convenience wrapper returning one [`Jet1`] per output.
    pub fn forward_jet1(&self, x: &[f64], dir: &[f64], order: usize) -> Result<Vec<Jet1>> {
        let seed = JetSeed::Dir1 { dir, order };
        let mut ws = JetWorkspace::default();
        let mut out = Vec::new();
        self.forward_jets(x, &seed, &mut ws, &mut out)?;
        let w = order + 1;
        Ok((0..self.spec.output_dim)
            .map(|o| Jet1::new(out[o * w..(o + 1) * w].to_vec()).expect("order within bounds"))
            .collect())
    }

    /// Records the jet-valued forward pass on a tape and returns one node
    /// per output. The tape must be bound to the full parameter array this
    /// eval was created over.
    pub fn forward_on_tape(&self, tape: &mut Tape, x: &[f64], seed: &JetSeed) -> Vec<NodeId> {
        let spec = self.spec;
        assert_eq!(x.len(), spec.input_dim, "input dimension");
        assert_eq!(tape.num_params(), self.params.len(), "tape parameter binding");
        let (rows, cols) = seed.shape();
        let n = spec.width;
        let l = spec.layout();
        let sigma = spec.activation;

        let inputs: Vec<NodeId> = (0..spec.input_dim)
            .map(|j| seed.record_coord(tape, x[j], j, rows, cols))
            .collect();

        let mut h = Vec::with_capacity(n);
        for r in 0..n {
            h.push(tape.affine(
                &inputs,
                self.base + l.w_in + r * spec.input_dim,
                Some(self.base + l.b_in + r),
            ));
        }
        let mut state = h.clone();
        for (bi, &(w1, b1, w2, b2)) in l.blocks.iter().enumerate() {
            let inner: Vec<NodeId> = if bi == 0 {
                h.iter().map(|&v| tape.activation(v, sigma)).collect()
            } else {
                let (w1, b1) = (w1.unwrap(), b1.unwrap());
                (0..n)
                    .map(|r| {
                        let a = tape.affine(&state, self.base + w1 + r * n, Some(self.base + b1 + r));
                        tape.activation(a, sigma)
                    })
                    .collect()
            };
            for r in 0..n {
                let a = tape.affine(&inner, self.base + w2 + r * n, Some(self.base + b2 + r));
                let act = tape.activation(a, sigma);
                state[r] = tape.add(act, state[r]);
            }
        }
        (0..spec.output_dim)
            .map(|o| tape.affine(&state, self.base + l.t + o * n, Some(self.base + l.b_out + o)))
            .collect()
    }
}

/// `out[r] = sum_j params[w_off + r*in_count + j] * input[j] + params[b_off + r]`,
/// coefficientwise over jets of `width` coefficients.
#[allow(clippy::too_many_arguments)]
fn affine_rows(
    params: &[f64],
    w_off: usize,
    b_off: Option<usize>,
    input: &[f64],
    in_count: usize,
    out_count: usize,
    width: usize,
    out: &mut [f64],
) {
    for r in 0..out_count {
        let row = &mut out[r * width..(r + 1) * width];
        row.fill(0.0);
        for j in 0..in_count {
            let wv = params[w_off + r * in_count + j];
            let inp = &input[j * width..(j + 1) * width];
            for k in 0..width {
                row[k] += wv * inp[k];
            }
        }
        if let Some(b) = b_off {
            row[0] += params[b + r];
        }
    }
}

// ---------------------------------------------------------------------------
// Parameter counting for the method/problem grid
// ---------------------------------------------------------------------------

/// Input and output dimension of every constituent network for a
/// (method, problem, variant) combination in `d` space dimensions.
pub fn net_shapes(
    method: MethodKind,
    problem: ProblemKind,
    variant: VariantKind,
    d: usize,
) -> Result<Vec<(usize, usize)>> {
    if variant == VariantKind::Partial && problem != ProblemKind::Biharmonic {
        return Err(Error::InvalidConfig(format!(
            "variant 'partial' only applies to the biharmonic problem, not {}",
            problem.name()
        )));
    }
    let din = if problem == ProblemKind::Kdv { d + 1 } else { d };
    let shapes = match (method, problem) {
        (MethodKind::Dgm, _) => vec![(din, 1)],
        (MethodKind::Mim1, ProblemKind::Poisson | ProblemKind::MongeAmpere) => {
            vec![(din, 1 + d)]
        }
        (MethodKind::Mim1, ProblemKind::Biharmonic) => match variant {
            VariantKind::All => vec![(din, 2 * d + 2)],
            VariantKind::Partial => vec![(din, 2)],
        },
        (MethodKind::Mim1, ProblemKind::Kdv) => vec![(din, 2 * d + 1)],
        (MethodKind::Mim2, ProblemKind::Poisson | ProblemKind::MongeAmpere) => {
            vec![(din, 1), (din, d)]
        }
        (MethodKind::Mim2, ProblemKind::Biharmonic) => match variant {
            VariantKind::All => vec![(din, 1), (din, d), (din, 1), (din, d)],
            VariantKind::Partial => vec![(din, 1), (din, 1)],
        },
        (MethodKind::Mim2, ProblemKind::Kdv) => vec![(din, 1), (din, d), (din, d)],
    };
    Ok(shapes)
}

/// Closed-form total parameter count across all constituent networks of a
/// (method, problem, variant) configuration, equal by construction to the
/// summed lengths of the vectors [`init_params`] produces.
pub fn parameter_count(
    method: MethodKind,
    problem: ProblemKind,
    variant: VariantKind,
    m: usize,
    n: usize,
    d: usize,
) -> Result<usize> {
    if m == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidConfig(
            "depth, width and dimension must be positive".into(),
        ));
    }
    Ok(net_shapes(method, problem, variant, d)?
        .into_iter()
        .map(|(din, dout)| (2 * m - 1) * n * n + (din + 2 * m) * n + dout * (n + 1))
        .sum())
}

// ---------------------------------------------------------------------------
// Checkpoint format
// ---------------------------------------------------------------------------

const CHECKPOINT_MAGIC: &[u8; 8] = b"MIMPARAM";
const CHECKPOINT_VERSION: u32 = 1;

/// Writes a parameter checkpoint: 16-byte header (magic `MIMPARAM`,
/// version u32 LE, count u32 LE) followed by the raw little-endian f64s.
pub fn write_checkpoint(path: &Path, params: &[f64]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(CHECKPOINT_MAGIC)?;
    f.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    f.write_all(&(params.len() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(params.len() * 8);
    for p in params {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    f.write_all(&buf)?;
    Ok(())
}

/// Reads a checkpoint written by [`write_checkpoint`].
pub fn read_checkpoint(path: &Path) -> Result<ParamVector> {
    let mut f = std::fs::File::open(path)?;
    let mut header = [0u8; 16];
    f.read_exact(&mut header)
        .map_err(|_| Error::BadCheckpoint("file shorter than the 16-byte header".into()))?;
    if &header[0..8] != CHECKPOINT_MAGIC {
        return Err(Error::BadCheckpoint("wrong magic".into()));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != CHECKPOINT_VERSION {
        return Err(Error::BadCheckpoint(format!(
            "unsupported version {version}"
        )));
    }
    let count = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let mut data = vec![0u8; count * 8];
    f.read_exact(&mut data)
        .map_err(|_| Error::BadCheckpoint("truncated payload".into()))?;
    let params = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ParamVector::from_vec(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(m: usize, n: usize, din: usize, dout: usize) -> NetworkSpec {
        NetworkSpec::new(m, n, din, dout, ActivationKind::Square).unwrap()
    }

    #[test]
    fn zero_parameters_yield_output_biases() {
        let s = spec(2, 4, 3, 2);
        let mut params = ParamVector::zeros(s.param_count());
        let l = s.layout();
        params.as_mut_slice()[l.b_out] = 1.5;
        params.as_mut_slice()[l.b_out + 1] = -2.5;
        let eval = NetworkEval::new(&s, &params);
        let out = eval.forward(&[0.3, -0.4, 0.9]).unwrap();
        assert_eq!(out, vec![1.5, -2.5]);
    }

    #[test]
    fn hand_evaluated_unit_network() {
        // m=1, n=1, square activation, weights 1, biases 0, x=1:
        // h=1, inner sigma=1, outer sigma(1)=1, shortcut adds h -> s=2, out=2.
        let s = spec(1, 1, 1, 1);
        let l = s.layout();
        let mut params = ParamVector::zeros(s.param_count());
        params.as_mut_slice()[l.w_in] = 1.0;
        params.as_mut_slice()[l.blocks[0].2] = 1.0;
        params.as_mut_slice()[l.t] = 1.0;
        let eval = NetworkEval::new(&s, &params);
        assert_eq!(eval.forward(&[1.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn output_transform_is_linear() {
        let s = spec(2, 3, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let params = init_params(&s, &mut rng);
        let x = [0.3, 0.8];
        let base = NetworkEval::new(&s, &params).forward(&x).unwrap()[0];

        let l = s.layout();
        let mut doubled = params.clone();
        for p in &mut doubled.as_mut_slice()[l.t..] {
            *p *= 2.0;
        }
        let two = NetworkEval::new(&s, &doubled).forward(&x).unwrap()[0];
        assert_relative_eq!(two, 2.0 * base, epsilon = 1e-14);
    }

    #[test]
    fn shortcut_reduces_to_input_layer() {
        // With W2 = 0 and b2 = 0, sigma(b2) = 0 and every block is the
        // identity, so the network is T applied to the input affine.
        let s = spec(3, 4, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut params = init_params(&s, &mut rng);
        let l = s.layout();
        let n = s.width;
        for &(_, _, w2, b2) in &l.blocks {
            for p in &mut params.as_mut_slice()[w2..w2 + n * n] {
                *p = 0.0;
            }
            for p in &mut params.as_mut_slice()[b2..b2 + n] {
                *p = 0.0;
            }
        }
        let x = [0.7, -0.2];
        let eval = NetworkEval::new(&s, &params);
        let got = eval.forward(&x).unwrap()[0];

        let mut expect = params.as_slice()[l.b_out];
        for r in 0..n {
            let mut h = params.as_slice()[l.b_in + r];
            for (j, &xj) in x.iter().enumerate() {
                h += params.as_slice()[l.w_in + r * 2 + j] * xj;
            }
            expect += params.as_slice()[l.t + r] * h;
        }
        assert_relative_eq!(got, expect, epsilon = 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_shape_error() {
        let s = spec(1, 2, 3, 1);
        let params = ParamVector::zeros(s.param_count());
        let eval = NetworkEval::new(&s, &params);
        assert!(matches!(
            eval.forward(&[1.0, 2.0]),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn order_zero_jets_match_plain_forward() {
        let s = spec(3, 5, 4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let params = init_params(&s, &mut rng);
        let eval = NetworkEval::new(&s, &params);
        let x = [0.1, -0.7, 0.4, 0.9];
        let plain = eval.forward(&x).unwrap();
        let mut ws = JetWorkspace::default();
        let mut out = Vec::new();
        eval.forward_jets(&x, &JetSeed::Value, &mut ws, &mut out)
            .unwrap();
        for (a, b) in plain.iter().zip(&out) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn tape_forward_matches_workspace_forward() {
        let s = spec(2, 4, 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let params = init_params(&s, &mut rng);
        let eval = NetworkEval::new(&s, &params);
        let x = [0.25, -0.6];
        let dir = [1.0, 0.0];
        let seed = JetSeed::Dir1 {
            dir: &dir,
            order: 2,
        };
        let mut ws = JetWorkspace::default();
        let mut plain = Vec::new();
        eval.forward_jets(&x, &seed, &mut ws, &mut plain).unwrap();

        let mut tape = Tape::new(params.as_slice());
        let nodes = eval.forward_on_tape(&mut tape, &x, &seed);
        for (o, node) in nodes.iter().enumerate() {
            assert_eq!(tape.coeffs(*node), &plain[o * 3..(o + 1) * 3]);
        }
    }

    #[test]
    fn init_is_seed_deterministic() {
        let s = spec(2, 6, 3, 2);
        let a = init_params(&s, &mut ChaCha8Rng::seed_from_u64(7));
        let b = init_params(&s, &mut ChaCha8Rng::seed_from_u64(7));
        let c = init_params(&s, &mut ChaCha8Rng::seed_from_u64(8));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn init_weights_have_zero_mean() {
        let s = spec(1, 50, 40, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let params = init_params(&s, &mut rng);
        let l = s.layout();
        let weights = &params.as_slice()[l.w_in..l.w_in + 50 * 40];
        let k = weights.len() as f64;
        let mean = weights.iter().sum::<f64>() / k;
        // Uniform on [-a, a] with a = sqrt(1/40): sd = a / sqrt(3).
        let se = (1.0f64 / 40.0).sqrt() / 3.0f64.sqrt() / k.sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} vs 3*SE {}", 3.0 * se);
    }

    #[test]
    fn counting_formula_matches_construction() {
        for m in 1..=3 {
            for n in [1, 2, 5, 10] {
                for din in [1, 2, 8] {
                    for dout in [1, 3] {
                        let s = spec(m, n, din, dout);
                        let built = init_params(&s, &mut ChaCha8Rng::seed_from_u64(0)).len();
                        assert_eq!(built, s.param_count());
                        let formula =
                            (2 * m - 1) * n * n + (din + 2 * m) * n + dout * (n + 1);
                        assert_eq!(built, formula, "m={m} n={n} din={din} dout={dout}");
                    }
                }
            }
        }
    }

    #[test]
    fn published_count_examples() {
        use MethodKind::*;
        use ProblemKind::*;
        use VariantKind::*;
        assert_eq!(parameter_count(Dgm, Poisson, All, 2, 10, 4).unwrap(), 391);
        assert_eq!(parameter_count(Mim1, Poisson, All, 2, 10, 4).unwrap(), 435);
        assert_eq!(
            parameter_count(Mim2, Biharmonic, All, 2, 8, 2).unwrap(),
            1014
        );
    }

    #[test]
    fn partial_variant_outside_biharmonic_is_invalid() {
        assert!(parameter_count(
            MethodKind::Mim1,
            ProblemKind::Poisson,
            VariantKind::Partial,
            2,
            5,
            2
        )
        .is_err());
    }

    #[test]
    fn checkpoint_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("params.ckpt");
        let data = vec![1.0, -2.5, 3.25, f64::MIN_POSITIVE, 0.0];
        write_checkpoint(&path, &data).unwrap();
        let back = read_checkpoint(&path).unwrap();
        assert_eq!(back.as_slice(), data.as_slice());
    }

    #[test]
    fn checkpoint_rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bogus.ckpt");
        std::fs::write(&path, b"NOTMAGIC\0\0\0\0\0\0\0\0").unwrap();
        assert!(matches!(
            read_checkpoint(&path),
            Err(Error::BadCheckpoint(_))
        ));
    }
}
