//! The four benchmark problems: domain, forcing, exact solution and its
//! derivatives, boundary and initial data.
//!
//! Every analytic formula is written once against [`JetRing`], so the same
//! expression serves plain evaluation, jet evaluation for injection
//! oracles, and the metric caches. Points are flat slices; time-dependent
//! problems append `t` after the `d` spatial coordinates.

use std::f64::consts::PI;

use crate::autodiff::JetRing;
use crate::error::{Error, Result};

/// Axis-aligned cube family used by all four problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// `[0, 1]^d`
    UnitCube,
    /// `[-1, 1]^d`
    SymmetricCube,
    /// `[0, 2 pi]^d`, periodically identified
    TorusCube,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub kind: DomainKind,
    pub dim: usize,
    /// Final time `T` for time-dependent problems.
    pub time_horizon: Option<f64>,
}

impl Domain {
    pub fn bounds(&self) -> (f64, f64) {
        match self.kind {
            DomainKind::UnitCube => (0.0, 1.0),
            DomainKind::SymmetricCube => (-1.0, 1.0),
            DomainKind::TorusCube => (0.0, 2.0 * PI),
        }
    }

    pub fn side(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    /// Spatial measure `|Omega| = side^d`.
    pub fn interior_measure(&self) -> f64 {
        self.side().powi(self.dim as i32)
    }

    /// Spatial boundary measure `|dOmega| = 2 d side^(d-1)`.
    pub fn boundary_measure(&self) -> f64 {
        2.0 * self.dim as f64 * self.side().powi(self.dim as i32 - 1)
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_horizon.is_some()
    }

    /// Coordinates per point: `d`, plus one trailing time coordinate when
    /// time-dependent.
    pub fn input_dim(&self) -> usize {
        self.dim + usize::from(self.is_time_dependent())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Poisson,
    MongeAmpere,
    Biharmonic,
    Kdv,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Poisson => "poisson",
            ProblemKind::MongeAmpere => "monge-ampere",
            ProblemKind::Biharmonic => "biharmonic",
            ProblemKind::Kdv => "kdv",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poisson" => Ok(ProblemKind::Poisson),
            "monge-ampere" => Ok(ProblemKind::MongeAmpere),
            "biharmonic" => Ok(ProblemKind::Biharmonic),
            "kdv" => Ok(ProblemKind::Kdv),
            other => Err(Error::InvalidConfig(format!(
                "unknown problem '{other}' (expected poisson|monge-ampere|biharmonic|kdv)"
            ))),
        }
    }
}

/// One benchmark PDE instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub domain: Domain,
}

/// `-Delta u + pi^2 u = 2 pi^2 sum_k cos(pi x_k)` on `[0,1]^d` with
/// homogeneous Neumann data; exact solution `u = sum_k cos(pi x_k)`.
pub fn poisson_spec(d: usize) -> ProblemSpec {
    ProblemSpec {
        kind: ProblemKind::Poisson,
        domain: Domain {
            kind: DomainKind::UnitCube,
            dim: d,
            time_horizon: None,
        },
    }
}

/// `det(grad^2 u) = f` on `[-1,1]^d` with Dirichlet data; exact solution
/// `u = exp(|x|^2 / d)`.
pub fn monge_ampere_spec(d: usize) -> ProblemSpec {
    ProblemSpec {
        kind: ProblemKind::MongeAmpere,
        domain: Domain {
            kind: DomainKind::SymmetricCube,
            dim: d,
            time_horizon: None,
        },
    }
}

/// `Delta^2 u = (pi^4/16) sum_k sin(pi x_k / 2)` on `[-1,1]^d` with
/// Dirichlet trace and homogeneous Neumann data; exact solution
/// `u = sum_k sin(pi x_k / 2)`.
pub fn biharmonic_spec(d: usize) -> ProblemSpec {
    ProblemSpec {
        kind: ProblemKind::Biharmonic,
        domain: Domain {
            kind: DomainKind::SymmetricCube,
            dim: d,
            time_horizon: None,
        },
    }
}

/// `u_t + sum_k u_{x_k x_k x_k} = 0` on `[0,T] x [0,2 pi]^d`, periodic in
/// every spatial axis; exact solution `u = sin(sum_k x_k + d t)`.
pub fn kdv_spec(d: usize, time_horizon: f64) -> ProblemSpec {
    ProblemSpec {
        kind: ProblemKind::Kdv,
        domain: Domain {
            kind: DomainKind::TorusCube,
            dim: d,
            time_horizon: Some(time_horizon),
        },
    }
}

impl ProblemSpec {
    pub fn for_kind(kind: ProblemKind, d: usize, time_horizon: f64) -> ProblemSpec {
        match kind {
            ProblemKind::Poisson => poisson_spec(d),
            ProblemKind::MongeAmpere => monge_ampere_spec(d),
            ProblemKind::Biharmonic => biharmonic_spec(d),
            ProblemKind::Kdv => kdv_spec(d, time_horizon),
        }
    }

    fn d(&self) -> usize {
        self.domain.dim
    }

    /// KdV phase `sum_k x_k + d t`.
    fn phase<R: JetRing>(&self, x: &[R]) -> R {
        let d = self.d();
        let mut acc = x[0].clone();
        for xi in &x[1..d] {
            acc = acc.add(xi);
        }
        acc.add(&x[d].scale(d as f64))
    }

    /// Exact solution, generic over the evaluation ring.
    pub fn exact_u_ring<R: JetRing>(&self, x: &[R]) -> R {
        let d = self.d();
        match self.kind {
            ProblemKind::Poisson => {
                let mut acc = x[0].scale(PI).cos();
                for xi in &x[1..d] {
                    acc = acc.add(&xi.scale(PI).cos());
                }
                acc
            }
            ProblemKind::MongeAmpere => {
                let mut s = x[0].mul(&x[0]);
                for xi in &x[1..d] {
                    s = s.add(&xi.mul(xi));
                }
                s.scale(1.0 / d as f64).exp()
            }
            ProblemKind::Biharmonic => {
                let mut acc = x[0].scale(PI / 2.0).sin();
                for xi in &x[1..d] {
                    acc = acc.add(&xi.scale(PI / 2.0).sin());
                }
                acc
            }
            ProblemKind::Kdv => self.phase(x).sin(),
        }
    }

    /// Exact gradient component `p_j = d u / d x_j`.
    pub fn exact_p_ring<R: JetRing>(&self, j: usize, x: &[R]) -> R {
        match self.kind {
            ProblemKind::Poisson => x[j].scale(PI).sin().scale(-PI),
            ProblemKind::MongeAmpere => {
                let u = self.exact_u_ring(x);
                x[j].mul(&u).scale(2.0 / self.d() as f64)
            }
            ProblemKind::Biharmonic => x[j].scale(PI / 2.0).cos().scale(PI / 2.0),
            ProblemKind::Kdv => self.phase(x).cos(),
        }
    }

    /// Exact second-order auxiliary: Laplacian for the biharmonic problem,
    /// `d^2 u / d x_j^2` (the `diag(grad p)` entries) for the KdV problem.
    pub fn exact_q_ring<R: JetRing>(&self, j: usize, x: &[R]) -> R {
        match self.kind {
            ProblemKind::Biharmonic => {
                let d = self.d();
                let mut acc = x[0].scale(PI / 2.0).sin();
                for xi in &x[1..d] {
                    acc = acc.add(&xi.scale(PI / 2.0).sin());
                }
                acc.scale(-PI * PI / 4.0)
            }
            ProblemKind::Kdv => self.phase(x).sin().scale(-1.0).add_scalar(0.0),
            _ => {
                let _ = j;
                unreachable!("q group undefined for {}", self.kind.name())
            }
        }
    }

    /// Exact third-order auxiliary `w_j = d (Delta u) / d x_j` (biharmonic).
    pub fn exact_w_ring<R: JetRing>(&self, j: usize, x: &[R]) -> R {
        match self.kind {
            ProblemKind::Biharmonic => x[j]
                .scale(PI / 2.0)
                .cos()
                .scale(-PI * PI * PI / 8.0),
            _ => unreachable!("w group undefined for {}", self.kind.name()),
        }
    }

    /// Forcing term evaluated at a point (including `t` when present).
    pub fn forcing(&self, x: &[f64]) -> f64 {
        let d = self.d();
        match self.kind {
            ProblemKind::Poisson => {
                2.0 * PI * PI * x[..d].iter().map(|&xi| (PI * xi).cos()).sum::<f64>()
            }
            ProblemKind::MongeAmpere => {
                let s: f64 = x[..d].iter().map(|&xi| xi * xi).sum();
                let scale = (2.0 / d as f64).powi(d as i32);
                scale * s.exp() * (1.0 + 2.0 * s / d as f64)
            }
            ProblemKind::Biharmonic => {
                PI.powi(4) / 16.0
                    * x[..d].iter().map(|&xi| (PI * xi / 2.0).sin()).sum::<f64>()
            }
            ProblemKind::Kdv => 0.0,
        }
    }

    pub fn exact_u(&self, x: &[f64]) -> f64 {
        self.exact_u_ring(x)
    }

    /// Spatial gradient of the exact solution.
    pub fn exact_grad(&self, x: &[f64]) -> Vec<f64> {
        (0..self.d()).map(|j| self.exact_p_ring(j, x)).collect()
    }

    pub fn exact_lap(&self, x: &[f64]) -> f64 {
        let d = self.d();
        match self.kind {
            ProblemKind::Poisson => {
                -PI * PI * x[..d].iter().map(|&xi| (PI * xi).cos()).sum::<f64>()
            }
            ProblemKind::MongeAmpere => {
                let s: f64 = x[..d].iter().map(|&xi| xi * xi).sum();
                let u = self.exact_u(x);
                u * (2.0 + 4.0 * s / (d as f64 * d as f64))
            }
            ProblemKind::Biharmonic => self.exact_q_ring(0, x),
            ProblemKind::Kdv => -(d as f64) * self.phase(x).sin(),
        }
    }

    /// Gradient of the Laplacian.
    pub fn exact_grad_lap(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d();
        match self.kind {
            ProblemKind::Poisson => (0..d)
                .map(|j| PI.powi(3) * (PI * x[j]).sin())
                .collect(),
            ProblemKind::MongeAmpere => {
                let dd = d as f64;
                let s: f64 = x[..d].iter().map(|&xi| xi * xi).sum();
                let u = self.exact_u(x);
                (0..d)
                    .map(|j| {
                        u * (2.0 * x[j] / dd) * (2.0 + 4.0 * s / (dd * dd))
                            + u * (8.0 * x[j] / (dd * dd))
                    })
                    .collect()
            }
            ProblemKind::Biharmonic => (0..d).map(|j| self.exact_w_ring(j, x)).collect(),
            ProblemKind::Kdv => {
                let c = self.phase(x).cos();
                (0..d).map(|_| -(d as f64) * c).collect()
            }
        }
    }

    /// Diagonal of the exact Hessian.
    pub fn exact_diag_hess(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d();
        match self.kind {
            ProblemKind::Poisson => (0..d)
                .map(|j| -PI * PI * (PI * x[j]).cos())
                .collect(),
            ProblemKind::MongeAmpere => {
                let dd = d as f64;
                let u = self.exact_u(x);
                (0..d)
                    .map(|j| u * (2.0 / dd + 4.0 * x[j] * x[j] / (dd * dd)))
                    .collect()
            }
            ProblemKind::Biharmonic => (0..d)
                .map(|j| -PI * PI / 4.0 * (PI * x[j] / 2.0).sin())
                .collect(),
            ProblemKind::Kdv => (0..d).map(|j| self.exact_q_ring(j, x)).collect(),
        }
    }

    /// Dirichlet boundary data where the problem imposes it (the exact
    /// trace); zero for the Poisson problem, whose boundary condition is
    /// homogeneous Neumann.
    pub fn boundary_value(&self, x: &[f64]) -> f64 {
        match self.kind {
            ProblemKind::Poisson => 0.0,
            _ => self.exact_u(x),
        }
    }

    /// Initial data `u_0(x)` for time-dependent problems; expects the
    /// spatial coordinates only.
    pub fn initial_value(&self, x_spatial: &[f64]) -> f64 {
        match self.kind {
            ProblemKind::Kdv => x_spatial.iter().sum::<f64>().sin(),
            _ => unreachable!("{} has no initial condition", self.kind.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_interior(spec: &ProblemSpec, rng: &mut impl Rng) -> Vec<f64> {
        let (lo, hi) = spec.domain.bounds();
        let mut x: Vec<f64> = (0..spec.domain.dim).map(|_| rng.gen_range(lo..hi)).collect();
        if let Some(t) = spec.domain.time_horizon {
            x.push(rng.gen_range(0.0..t));
        }
        x
    }

    /// PDE residual of the exact solution, from analytic derivatives only.
    fn residual(spec: &ProblemSpec, x: &[f64]) -> f64 {
        let d = spec.domain.dim;
        match spec.kind {
            ProblemKind::Poisson => {
                -spec.exact_lap(x) + PI * PI * spec.exact_u(x) - spec.forcing(x)
            }
            ProblemKind::MongeAmpere => {
                // Hessian of exp(|x|^2/d) is u ((2/d) I + (4/d^2) x x^T).
                let u = spec.exact_u(x);
                let dd = d as f64;
                let h: Vec<Vec<f64>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let kron = if i == j { 2.0 / dd } else { 0.0 };
                                u * (kron + 4.0 * x[i] * x[j] / (dd * dd))
                            })
                            .collect()
                    })
                    .collect();
                fd::determinant_perm_sum(&h) - spec.forcing(x)
            }
            ProblemKind::Biharmonic => {
                // bilaplacian of a per-coordinate sum: (pi/2)^4 per term
                let bilap: f64 = x[..d]
                    .iter()
                    .map(|&xi| (PI / 2.0f64).powi(4) * (PI * xi / 2.0).sin())
                    .sum();
                bilap - spec.forcing(x)
            }
            ProblemKind::Kdv => {
                // u_t + sum_k u_xxx with u = sin(phase)
                let phase: f64 = x[..d].iter().sum::<f64>() + d as f64 * x[d];
                d as f64 * phase.cos() + d as f64 * (-phase.cos())
            }
        }
    }

    #[test]
    fn exact_solutions_satisfy_their_pdes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [1, 2, 4] {
            for spec in [
                poisson_spec(d),
                monge_ampere_spec(d),
                biharmonic_spec(d),
                kdv_spec(d, 1.0),
            ] {
                for _ in 0..100 {
                    let x = random_interior(&spec, &mut rng);
                    let r = residual(&spec, &x);
                    assert!(
                        r.abs() < 1e-10,
                        "{} d={d}: residual {r} at {x:?}",
                        spec.kind.name()
                    );
                }
            }
        }
    }

    #[test]
    fn poisson_forcing_at_origin() {
        let spec = poisson_spec(2);
        assert_relative_eq!(spec.forcing(&[0.0, 0.0]), 4.0 * PI * PI, epsilon = 1e-12);
        assert_relative_eq!(spec.forcing(&[0.0, 0.0]), 39.478, epsilon = 1e-3);
    }

    #[test]
    fn poisson_gradient_vanishes_at_origin() {
        let spec = poisson_spec(3);
        assert_eq!(spec.exact_grad(&[0.0, 0.0, 0.0]), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn monge_ampere_forcing_values_at_origin() {
        assert_relative_eq!(monge_ampere_spec(2).forcing(&[0.0, 0.0]), 1.0, epsilon = 1e-14);
        assert_relative_eq!(
            monge_ampere_spec(4).forcing(&[0.0; 4]),
            0.0625,
            epsilon = 1e-14
        );
    }

    #[test]
    fn monge_ampere_forcing_matches_fd_hessian_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [1, 2, 3] {
            let spec = monge_ampere_spec(d);
            let u = |x: &[f64]| spec.exact_u(x);
            for _ in 0..100 {
                let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.9..0.9)).collect();
                let h = fd::hessian(&u, &x, 1e-4);
                let det = fd::determinant_perm_sum(&h);
                let f = spec.forcing(&x);
                assert!(
                    (det - f).abs() < 1e-8 * (1.0 + f.abs()),
                    "d={d}: fd det {det} vs forcing {f} at {x:?}"
                );
            }
        }
    }

    #[test]
    fn biharmonic_exact_values() {
        let spec = biharmonic_spec(2);
        assert_relative_eq!(spec.exact_u(&[1.0, 1.0]), 2.0, epsilon = 1e-14);
        // Normal derivative on the faces x_j = +-1 vanishes.
        for x1 in [-1.0, 1.0] {
            let g = spec.exact_grad(&[x1, 0.3]);
            assert!(g[0].abs() < 1e-15, "normal derivative {g:?}");
        }
    }

    #[test]
    fn kdv_initial_and_periodicity() {
        let spec = kdv_spec(2, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            let at_zero = spec.exact_u(&[x[0], x[1], 0.0]);
            assert_eq!(at_zero, spec.initial_value(&x));

            let t = rng.gen_range(0.0..1.0);
            let u = spec.exact_u(&[x[0], x[1], t]);
            let shifted = spec.exact_u(&[x[0] + 2.0 * PI, x[1], t]);
            assert_relative_eq!(u, shifted, epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_derivative_fields_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in [1, 2, 3] {
            for spec in [
                poisson_spec(d),
                monge_ampere_spec(d),
                biharmonic_spec(d),
                kdv_spec(d, 1.0),
            ] {
                let u = |x: &[f64]| spec.exact_u(x);
                for _ in 0..50 {
                    let x = random_interior(&spec, &mut rng);
                    let g = spec.exact_grad(&x);
                    let g_fd = fd::gradient(&u, &x, 1e-5);
                    for j in 0..d {
                        assert_relative_eq!(g[j], g_fd[j], max_relative = 1e-6, epsilon = 1e-6);
                    }
                    let lap = spec.exact_lap(&x);
                    let lap_fd: f64 = (0..d).map(|i| fd::mixed2(&u, &x, i, i, 1e-4)).sum();
                    assert_relative_eq!(lap, lap_fd, max_relative = 1e-5, epsilon = 1e-5);

                    let dh = spec.exact_diag_hess(&x);
                    for (j, &v) in dh.iter().enumerate() {
                        let v_fd = fd::mixed2(&u, &x, j, j, 1e-4);
                        assert_relative_eq!(v, v_fd, max_relative = 1e-5, epsilon = 1e-5);
                    }

                    let gl = spec.exact_grad_lap(&x);
                    let lap_fn = |y: &[f64]| spec.exact_lap(y);
                    let gl_fd = fd::gradient(&lap_fn, &x, 1e-5);
                    for j in 0..d {
                        assert_relative_eq!(gl[j], gl_fd[j], max_relative = 1e-5, epsilon = 1e-5);
                    }
                }
            }
        }
    }

    #[test]
    fn measures() {
        let p = poisson_spec(3);
        assert_eq!(p.domain.interior_measure(), 1.0);
        assert_eq!(p.domain.boundary_measure(), 6.0);
        let b = biharmonic_spec(2);
        assert_eq!(b.domain.interior_measure(), 4.0);
        assert_eq!(b.domain.boundary_measure(), 8.0);
        let k = kdv_spec(2, 1.0);
        assert_eq!(k.domain.input_dim(), 3);
        assert_relative_eq!(
            k.domain.interior_measure(),
            (2.0 * PI) * (2.0 * PI),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ring_formulas_match_value_formulas() {
        // The jet evaluation at order 0 must agree with plain evaluation.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [1, 2, 3] {
            for spec in [
                poisson_spec(d),
                monge_ampere_spec(d),
                biharmonic_spec(d),
                kdv_spec(d, 1.0),
            ] {
                for _ in 0..20 {
                    let x = random_interior(&spec, &mut rng);
                    let jets: Vec<crate::autodiff::Jet1> = x
                        .iter()
                        .map(|&xi| crate::autodiff::Jet1::constant(xi, 1))
                        .collect();
                    let u_jet = spec.exact_u_ring(&jets);
                    assert_relative_eq!(u_jet.value(), spec.exact_u(&x), epsilon = 1e-14);
                    for j in 0..d {
                        let p_jet = spec.exact_p_ring(j, &jets);
                        assert_relative_eq!(
                            p_jet.value(),
                            spec.exact_grad(&x)[j],
                            epsilon = 1e-13
                        );
                    }
                }
            }
        }
    }
}
