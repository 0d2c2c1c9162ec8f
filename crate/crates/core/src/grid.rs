//! Phase-space manifolds, invariant-measure quadrature grids and
//! grid-sampled functions.
//!
//! Two charts are supported:
//!
//! - plane: `z = (q + ip)/√2`, invariant measure `dμ = d²z/π`, discretized
//!   by a polar product rule (Gauss–Legendre radial × uniform angular);
//! - sphere: `(θ, φ)` with `dμ = (2j+1)/4π · sinθ dθ dφ`, discretized by
//!   Gauss–Legendre in `cosθ` × uniform `φ`, so that the spin-j resolution
//!   of identity is exact.
//!
//! Grids carry their differentiation machinery: second-order non-uniform
//! central stencils and a spectral (collocation) alternative along the first
//! axis, and spectral periodic differences along the angle.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::Spin;

static GRID_COUNTER: AtomicU64 = AtomicU64::new(1);

/* Manifold *******************************************************************/

/// Phase-space manifold: plane of cutoff radius `R` or sphere of spin `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Manifold {
    Plane { radius: f64 },
    Sphere { spin: Spin },
}

impl Manifold {
    /// Symplectic inverse `ω^{12}` at a chart point; the matrix is
    /// `[[0, v], [-v, 0]]` with `v` the returned value.
    ///
    /// Plane chart `(q,p)`: `{q,p} = 1`, so `v = 1`. Sphere chart `(θ,φ)`:
    /// `ω = j sinθ dθ∧dφ`, so `v = 1/(j sinθ)`; interior Gauss–Legendre
    /// nodes keep `sinθ` away from zero.
    pub fn omega_inv(&self, point: &PhasePoint) -> f64 {
        match self {
            Manifold::Plane { .. } => 1.0,
            Manifold::Sphere { spin } => 1.0 / (spin.value() * point.c1.sin()),
        }
    }

    pub fn is_plane(&self) -> bool {
        matches!(self, Manifold::Plane { .. })
    }

    /// True if the chart contains the point.
    pub fn contains(&self, point: &PhasePoint) -> bool {
        match self {
            Manifold::Plane { radius } => point.z().norm() <= *radius,
            Manifold::Sphere { .. } => point.c1 > 0.0 && point.c1 < PI,
        }
    }
}

/* PhasePoint *****************************************************************/

/// Chart coordinates of a phase-space point: plane `(q, p)`, sphere `(θ, φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub c1: f64,
    pub c2: f64,
}

impl PhasePoint {
    pub fn plane(q: f64, p: f64) -> Self {
        Self { c1: q, c2: p }
    }

    /// Plane point from `z = (q + ip)/√2`.
    pub fn from_z(z: C64) -> Self {
        let s = 2.0_f64.sqrt();
        Self { c1: z.re * s, c2: z.im * s }
    }

    pub fn sphere(theta: f64, phi: f64) -> Self {
        Self { c1: theta, c2: phi }
    }

    pub fn q(&self) -> f64 {
        self.c1
    }

    pub fn p(&self) -> f64 {
        self.c2
    }

    /// Complex label `z = (q + ip)/√2` (plane chart).
    pub fn z(&self) -> C64 {
        C64::new(self.c1, self.c2) / 2.0_f64.sqrt()
    }

    pub fn theta(&self) -> f64 {
        self.c1
    }

    pub fn phi(&self) -> f64 {
        self.c2
    }

    /// Unit vector on the sphere (sphere chart).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = (self.c1.sin(), self.c1.cos());
        let (sp, cp) = (self.c2.sin(), self.c2.cos());
        [st * cp, st * sp, ct]
    }
}

/* QuadratureGrid *************************************************************/

/// Product quadrature rule over a manifold chart.
///
/// Nodes are stored row-major over `(axis1, axis2)` = (radial ρ or polar θ,
/// angle φ); `weights` approximate the invariant measure.
#[derive(Debug)]
pub struct QuadratureGrid {
    id: u64,
    manifold: Manifold,
    n1: usize,
    n2: usize,
    axis1: Vec<f64>,
    axis2: Vec<f64>,
    nodes: Vec<PhasePoint>,
    weights: Vec<f64>,
    d1_stencil: Vec<[f64; 3]>,
    d1_spectral: DMatrix<f64>,
    d2_row: Vec<f64>,
}

impl QuadratureGrid {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn nodes(&self) -> &[PhasePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node(&self, i: usize) -> PhasePoint {
        self.nodes[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn axis1(&self) -> &[f64] {
        &self.axis1
    }

    pub fn axis2(&self) -> &[f64] {
        &self.axis2
    }

    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Scheme for derivatives along the first grid axis. The angle is always
/// differentiated spectrally (periodic, all-point central differences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DerivScheme {
    /// Three-point non-uniform central stencils, one-sided at the ends.
    #[default]
    CentralO2,
    /// Collocation (barycentric Lagrange) derivative on the full node set.
    Spectral,
}

impl QuadratureGrid {
    /// Derivative along axis 1 (ρ on the plane, θ on the sphere).
    pub fn deriv_axis1(&self, values: &[C64], scheme: DerivScheme) -> Vec<C64> {
        assert_eq!(values.len(), self.len());
        let mut out = vec![C64::ZERO; values.len()];
        match scheme {
            DerivScheme::CentralO2 => {
                for i1 in 0..self.n1 {
                    let [cm, c0, cp] = self.d1_stencil[i1];
                    let (im, ip) = stencil_neighbors(i1, self.n1);
                    for i2 in 0..self.n2 {
                        out[self.index(i1, i2)] = values[self.index(im, i2)] * cm
                            + values[self.index(i1, i2)] * c0
                            + values[self.index(ip, i2)] * cp;
                    }
                }
            }
            DerivScheme::Spectral => match self.manifold {
                Manifold::Plane { .. } => {
                    for i1 in 0..self.n1 {
                        for i2 in 0..self.n2 {
                            let mut acc = C64::ZERO;
                            for k in 0..self.n1 {
                                acc += values[self.index(k, i2)] * self.d1_spectral[(i1, k)];
                            }
                            out[self.index(i1, i2)] = acc;
                        }
                    }
                }
                Manifold::Sphere { .. } => self.sphere_theta_derivative(values, &mut out),
            },
        }
        out
    }

    /// Spectral θ-derivative on the sphere by azimuthal mode splitting.
    ///
    /// After a DFT in φ, a degree-L spherical polynomial has modes
    /// `f_m(θ) = (sinθ)^{|m| mod 2} · poly(cosθ)`, so even modes are
    /// differentiated exactly by collocation in `x = cosθ` and odd modes by
    /// peeling one `sinθ` factor first:
    /// `∂_θ(sinθ Q) = cosθ Q − sin²θ Q'(x)`.
    fn sphere_theta_derivative(&self, values: &[C64], out: &mut [C64]) {
        let (n1, n2) = (self.n1, self.n2);
        let sin_t: Vec<f64> = self.axis1.iter().map(|t| t.sin()).collect();
        let cos_t: Vec<f64> = self.axis1.iter().map(|t| t.cos()).collect();
        let dx = &self.d1_spectral;

        // forward DFT per θ-row: F[m][i1]
        let mut modes = vec![vec![C64::ZERO; n1]; n2];
        for i1 in 0..n1 {
            let base = i1 * n2;
            for (m, row) in modes.iter_mut().enumerate() {
                let mut acc = C64::ZERO;
                for l in 0..n2 {
                    let ang = -2.0 * PI * (m * l % n2) as f64 / n2 as f64;
                    acc += values[base + l] * C64::from_polar(1.0, ang);
                }
                row[i1] = acc;
            }
        }

        // θ-derivative per mode
        let mut dmodes = vec![vec![C64::ZERO; n1]; n2];
        for m in 0..n2 {
            let signed = if m <= n2 / 2 { m as i64 } else { m as i64 - n2 as i64 };
            let odd = signed.unsigned_abs() % 2 == 1;
            let f_m = &modes[m];
            if odd {
                let q: Vec<C64> = (0..n1).map(|i| f_m[i] / sin_t[i]).collect();
                for i in 0..n1 {
                    let mut dq = C64::ZERO;
                    for k in 0..n1 {
                        dq += q[k] * dx[(i, k)];
                    }
                    dmodes[m][i] = q[i] * cos_t[i] - dq * (sin_t[i] * sin_t[i]);
                }
            } else {
                for i in 0..n1 {
                    let mut df = C64::ZERO;
                    for k in 0..n1 {
                        df += f_m[k] * dx[(i, k)];
                    }
                    dmodes[m][i] = df * (-sin_t[i]);
                }
            }
        }

        // inverse DFT
        let scale = 1.0 / n2 as f64;
        for i1 in 0..n1 {
            let base = i1 * n2;
            for l in 0..n2 {
                let mut acc = C64::ZERO;
                for (m, row) in dmodes.iter().enumerate() {
                    let ang = 2.0 * PI * (m * l % n2) as f64 / n2 as f64;
                    acc += row[i1] * C64::from_polar(1.0, ang);
                }
                out[base + l] = acc * scale;
            }
        }
    }

    /// Spectral derivative along the periodic angle axis.
    pub fn deriv_axis2(&self, values: &[C64]) -> Vec<C64> {
        assert_eq!(values.len(), self.len());
        let n2 = self.n2;
        let mut out = vec![C64::ZERO; values.len()];
        for i1 in 0..self.n1 {
            let base = i1 * n2;
            for i2 in 0..n2 {
                let mut acc = C64::ZERO;
                for k in 1..n2 {
                    // circulant: coefficient of f_{i2+k} is d_k
                    acc += values[base + (i2 + k) % n2] * self.d2_row[k];
                }
                out[base + i2] = acc;
            }
        }
        out
    }
}

fn stencil_neighbors(i: usize, n: usize) -> (usize, usize) {
    if i == 0 {
        (1, 2) // one-sided coefficients stored to match these positions
    } else if i == n - 1 {
        (n - 2, n - 3)
    } else {
        (i - 1, i + 1)
    }
}

/* Builders *******************************************************************/

/// Polar quadrature of the plane disk `|z| ≤ R` for `dμ = d²z/π`:
/// Gauss–Legendre radial on `[0, R]`, uniform trapezoidal angle.
///
/// Total weight is `R²`; Gaussian moments converge to machine precision
/// once the radial rule resolves `e^{-ρ²}`.
pub fn build_plane_grid(radius: f64, n_radial: usize, n_angular: usize) -> Result<Arc<QuadratureGrid>> {
    build_plane_grid_segmented(radius, &[], n_radial, n_angular)
}

/// Plane grid whose radial rule is a composite Gauss–Legendre rule with the
/// given interior breakpoints (each segment gets `n_radial` nodes). Aligning
/// a breakpoint with a region boundary makes node-indicator integrals of
/// smooth densities quadrature-exact instead of `O(h)`.
pub fn build_plane_grid_segmented(
    radius: f64,
    breakpoints: &[f64],
    n_radial: usize,
    n_angular: usize,
) -> Result<Arc<QuadratureGrid>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidGridSize(format!("radius {radius} must be positive")));
    }
    if n_radial < 8 || n_angular < 8 {
        return Err(Error::InvalidGridSize(format!(
            "plane grid needs n_radial ≥ 8 and n_angular ≥ 8, got {n_radial}×{n_angular}"
        )));
    }
    let mut edges = vec![0.0];
    for &b in breakpoints {
        if !(b > *edges.last().unwrap() && b < radius) {
            return Err(Error::InvalidGridSize(format!(
                "breakpoints must increase strictly inside (0, {radius})"
            )));
        }
        edges.push(b);
    }
    edges.push(radius);

    let mut axis1 = Vec::new();
    let mut w1 = Vec::new();
    let mut d1_spectral = DMatrix::zeros(n_radial * (edges.len() - 1), n_radial * (edges.len() - 1));
    for (s, seg) in edges.windows(2).enumerate() {
        let (nodes, weights) = gauss_legendre(n_radial, seg[0], seg[1]);
        // collocation stays within a segment: the global matrix is block-diagonal
        let block = barycentric_derivative_matrix(&nodes);
        d1_spectral
            .view_mut((s * n_radial, s * n_radial), (n_radial, n_radial))
            .copy_from(&block);
        for (rho, u) in nodes.iter().zip(weights.iter()) {
            axis1.push(*rho);
            // dμ = (1/π) ρ dρ dφ with uniform φ weight 2π/n: per-node 2 ρ u / n
            w1.push(2.0 * rho * u);
        }
    }
    let manifold = Manifold::Plane { radius };
    Ok(finish_grid(manifold, axis1, w1, n_angular, d1_spectral, |rho, phi| {
        let s = 2.0_f64.sqrt();
        PhasePoint::plane(s * rho * phi.cos(), s * rho * phi.sin())
    }))
}

/// Sphere quadrature for `dμ = (2j+1)/4π · sinθ dθ dφ`: Gauss–Legendre in
/// `cosθ` × uniform `φ`. Exact for integrands polynomial of degree
/// `< 2 n_theta` in `cosθ` and band-limited below `n_phi` in `φ`;
/// `Σ weights = 2j+1` at machine precision.
pub fn build_sphere_grid(j: Spin, n_theta: usize, n_phi: usize) -> Result<Arc<QuadratureGrid>> {
    let min_theta = j.twice() as usize + 2;
    let min_phi = 2 * j.twice() as usize + 2;
    if n_theta < min_theta || n_phi < min_phi {
        return Err(Error::InvalidGridSize(format!(
            "sphere grid for j = {} needs at least {}×{}, got {}×{}",
            j.value(),
            min_theta,
            min_phi,
            n_theta,
            n_phi
        )));
    }
    let (x, v) = gauss_legendre(n_theta, -1.0, 1.0);
    let mut pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(v.iter())
        .map(|(xi, vi)| (xi.acos(), (j.dim() as f64) * vi / 2.0))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (axis1, w1): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    // θ-derivative by collocation in x = cosθ (the natural interpolation
    // variable on these nodes): d/dθ = −sinθ d/dx.
    let x_sorted: Vec<f64> = axis1.iter().map(|t: &f64| t.cos()).collect();
    let dx = barycentric_derivative_matrix(&x_sorted);
    let mut d1_spectral = dx;
    for i in 0..axis1.len() {
        let s = -axis1[i].sin();
        for k in 0..axis1.len() {
            d1_spectral[(i, k)] *= s;
        }
    }

    let manifold = Manifold::Sphere { spin: j };
    Ok(finish_grid(manifold, axis1, w1, n_phi, d1_spectral, PhasePoint::sphere))
}

fn finish_grid(
    manifold: Manifold,
    axis1: Vec<f64>,
    w1: Vec<f64>,
    n2: usize,
    d1_spectral: DMatrix<f64>,
    make_point: impl Fn(f64, f64) -> PhasePoint,
) -> Arc<QuadratureGrid> {
    let n1 = axis1.len();
    let w2 = 1.0 / n2 as f64;
    let axis2: Vec<f64> = (0..n2).map(|l| 2.0 * PI * l as f64 / n2 as f64).collect();

    let mut nodes = Vec::with_capacity(n1 * n2);
    let mut weights = Vec::with_capacity(n1 * n2);
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            nodes.push(make_point(axis1[i1], axis2[i2]));
            weights.push(w1[i1] * w2);
        }
    }

    let d1_stencil = nonuniform_stencils(&axis1);
    let d2_row = periodic_derivative_row(n2);

    Arc::new(QuadratureGrid {
        id: GRID_COUNTER.fetch_add(1, Ordering::Relaxed),
        manifold,
        n1,
        n2,
        axis1,
        axis2,
        nodes,
        weights,
        d1_stencil,
        d1_spectral,
        d2_row,
    })
}

/// Three-point first-derivative coefficients on non-uniform nodes:
/// `[c_minus, c_center, c_plus]` with neighbor positions per
/// `stencil_neighbors` (one-sided at the two ends). Second-order accurate.
fn nonuniform_stencils(x: &[f64]) -> Vec<[f64; 3]> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            let h1 = x[1] - x[0];
            let h2 = x[2] - x[1];
            // stencil positions (x1, x0, x2): coefficients [c@x1, c@x0, c@x2]
            out.push([
                (h1 + h2) / (h1 * h2),
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                -h1 / (h2 * (h1 + h2)),
            ]);
        } else if i == n - 1 {
            let h1 = x[n - 1] - x[n - 2];
            let h2 = x[n - 2] - x[n - 3];
            out.push([
                -(h1 + h2) / (h1 * h2),
                (2.0 * h1 + h2) / (h1 * (h1 + h2)),
                h1 / (h2 * (h1 + h2)),
            ]);
        } else {
            let hm = x[i] - x[i - 1];
            let hp = x[i + 1] - x[i];
            out.push([
                -hp / (hm * (hm + hp)),
                (hp - hm) / (hm * hp),
                hm / (hp * (hm + hp)),
            ]);
        }
    }
    out
}

/// Barycentric Lagrange first-derivative matrix on arbitrary distinct nodes,
/// with log-scaled weights to avoid under/overflow on large node sets.
fn barycentric_derivative_matrix(x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut log_w = vec![0.0_f64; n];
    let mut sign = vec![1.0_f64; n];
    for j in 0..n {
        let mut s = 0.0;
        let mut sg = 1.0;
        for k in 0..n {
            if k != j {
                let d = x[j] - x[k];
                s -= d.abs().ln();
                if d < 0.0 {
                    sg = -sg;
                }
            }
        }
        log_w[j] = s;
        sign[j] = sg;
    }
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let val = sign[j] / sign[i] * (log_w[j] - log_w[i]).exp() / (x[i] - x[j]);
                d[(i, j)] = val;
                row_sum += val;
            }
        }
        d[(i, i)] = -row_sum;
    }
    d
}

/// Coefficients `d_k` of the antisymmetric spectral derivative on a uniform
/// periodic grid: `(Df)_i = Σ_{k≥1} d_k (f_{i+k} − f_{i−k})`. Exact for all
/// resolvable harmonics.
fn periodic_derivative_row(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let mut d = vec![0.0; n];
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let s = if k % 2 == 0 { -1.0 } else { 1.0 };
        *dk = if n % 2 == 0 {
            0.5 * s / (0.5 * k as f64 * h).tan()
        } else {
            0.5 * s / (0.5 * k as f64 * h).sin()
        };
    }
    d
}

/* Gauss–Legendre *************************************************************/

/// Gauss–Legendre nodes and weights on `[a, b]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            pp = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/* GridFunction ***************************************************************/

/// Complex-valued function sampled at grid nodes.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Arc<QuadratureGrid>,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<C64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count must match node count");
        Self { grid, values }
    }

    pub fn from_fn(grid: &Arc<QuadratureGrid>, f: impl Fn(&PhasePoint) -> C64) -> Self {
        let values = grid.nodes().iter().map(&f).collect();
        Self { grid: Arc::clone(grid), values }
    }

    pub fn from_real_fn(grid: &Arc<QuadratureGrid>, f: impl Fn(&PhasePoint) -> f64) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn constant(grid: &Arc<QuadratureGrid>, c: C64) -> Self {
        Self { grid: Arc::clone(grid), values: vec![c; grid.len()] }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn get(&self, i: usize) -> C64 {
        self.values[i]
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.id() != other.grid.id() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    /// Quadrature integral `∫ f dμ = Σ w_i f(x_i)`.
    pub fn integral(&self) -> C64 {
        self.values
            .iter()
            .zip(self.grid.weights().iter())
            .map(|(&v, &w)| v * w)
            .sum()
    }

    /// Weighted inner product `⟨f|g⟩ = Σ w_i conj(f_i) g_i`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .zip(self.grid.weights().iter())
            .map(|((&a, &b), &w)| a.conj() * b * w)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).unwrap().re.max(0.0).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sup norm restricted to nodes satisfying the predicate (used for
    /// interior-only assertions on the plane).
    pub fn sup_norm_where(&self, pred: impl Fn(&PhasePoint) -> bool) -> f64 {
        self.values
            .iter()
            .zip(self.grid.nodes().iter())
            .filter(|(_, x)| pred(x))
            .map(|(v, _)| v.norm())
            .fold(0.0, f64::max)
    }

    /// CSV dump with columns `coord1, coord2, weight, re, im`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "coord1,coord2,weight,re,im")?;
        for (i, x) in self.grid.nodes().iter().enumerate() {
            let v = self.values[i];
            writeln!(out, "{},{},{},{},{}", x.c1, x.c2, self.grid.weight(i), v.re, v.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_low_order() {
        let (x, w) = gauss_legendre(2, -1.0, 1.0);
        assert!((x[0] + 1.0 / 3.0_f64.sqrt()).abs() < 1e-14);
        assert!((x[1] - 1.0 / 3.0_f64.sqrt()).abs() < 1e-14);
        assert!((w[0] - 1.0).abs() < 1e-14);
        // degree-3 exactness on a shifted interval
        let (x, w) = gauss_legendre(5, 0.0, 2.0);
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| xi.powi(3) * wi).sum();
        assert!((integral - 4.0).abs() < 1e-12);
    }

    #[test]
    fn plane_grid_normalization() {
        let grid = build_plane_grid(6.0, 80, 80).unwrap();
        // total weight = R²
        assert!((grid.total_weight() - 36.0).abs() < 1e-9);
        // ∫ dμ e^{-|z|²} = 1 (vacuum Husimi mass)
        let gauss = GridFunction::from_real_fn(&grid, |x| (-x.z().norm_sqr()).exp());
        assert!((gauss.integral().re - 1.0).abs() < 1e-8);
        // ∫ dμ |z|² e^{-|z|²} = 1 (Γ-function moment)
        let moment = GridFunction::from_real_fn(&grid, |x| {
            let r2 = x.z().norm_sqr();
            r2 * (-r2).exp()
        });
        assert!((moment.integral().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn plane_grid_rejects_bad_sizes() {
        assert!(build_plane_grid(6.0, 4, 80).is_err());
        assert!(build_plane_grid(6.0, 80, 4).is_err());
        assert!(build_plane_grid(-1.0, 80, 80).is_err());
    }

    #[test]
    fn segmented_plane_grid_alignment() {
        let grid = build_plane_grid_segmented(6.0, &[1.0], 40, 32).unwrap();
        // mass of e^{-|z|²} inside |z| ≤ 1 is exactly 1 − e^{-1} because the
        // segment edge coincides with the disk boundary
        let inside: f64 = grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .filter(|(x, _)| x.z().norm() <= 1.0)
            .map(|(x, w)| w * (-x.z().norm_sqr()).exp())
            .sum();
        assert!((inside - (1.0 - (-1.0_f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn sphere_grid_normalization() {
        for (j, nt, np) in [(0.5, 4, 8), (1.0, 6, 8), (2.0, 8, 12), (5.0, 14, 24)] {
            let j = Spin::from_f64(j).unwrap();
            let grid = build_sphere_grid(j, nt, np).unwrap();
            assert!((grid.total_weight() - j.dim() as f64).abs() < 1e-12);
            // ∫ cosθ dμ = 0 by symmetry
            let c = GridFunction::from_real_fn(&grid, |x| x.theta().cos());
            assert!(c.integral().norm() < 1e-12);
            // ∫ cos²θ dμ = (2j+1)/3
            let c2 = GridFunction::from_real_fn(&grid, |x| x.theta().cos().powi(2));
            assert!((c2.integral().re - j.dim() as f64 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_grid_rejects_undersized() {
        let j = Spin::from_f64(2.0).unwrap();
        assert!(build_sphere_grid(j, 4, 12).is_err());
        assert!(build_sphere_grid(j, 8, 6).is_err());
    }

    fn phi_of(x: &PhasePoint) -> f64 {
        x.p().atan2(x.q()).rem_euclid(2.0 * PI)
    }

    #[test]
    fn angle_derivative_is_spectrally_exact() {
        let grid = build_plane_grid(3.0, 10, 16).unwrap();
        for k in 1..6 {
            let f = GridFunction::from_real_fn(&grid, |x| (k as f64 * phi_of(x)).cos());
            let df = grid.deriv_axis2(f.values());
            for (i, x) in grid.nodes().iter().enumerate() {
                let expected = -(k as f64) * (k as f64 * phi_of(x)).sin();
                assert!(
                    (df[i].re - expected).abs() < 1e-11,
                    "k={k} i={i}: {} vs {expected}",
                    df[i].re
                );
            }
        }
    }

    #[test]
    fn radial_derivative_exact_on_quadratics() {
        let grid = build_plane_grid(4.0, 20, 8).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| {
            let r = x.z().norm();
            1.5 * r * r - 0.5 * r + 2.0
        });
        let df = grid.deriv_axis1(f.values(), DerivScheme::CentralO2);
        for i1 in 0..grid.shape().0 {
            let rho = grid.axis1()[i1];
            let expected = 3.0 * rho - 0.5;
            let got = df[grid.index(i1, 0)].re;
            assert!((got - expected).abs() < 1e-10, "rho={rho}: {got} vs {expected}");
        }
    }

    #[test]
    fn spectral_radial_derivative_on_gaussian() {
        let grid = build_plane_grid(6.0, 60, 8).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| (-x.z().norm_sqr()).exp());
        let df = grid.deriv_axis1(f.values(), DerivScheme::Spectral);
        for i1 in 0..grid.shape().0 {
            let rho = grid.axis1()[i1];
            let expected = -2.0 * rho * (-rho * rho).exp();
            let got = df[grid.index(i1, 0)].re;
            assert!((got - expected).abs() < 1e-10, "rho={rho}: {got} vs {expected}");
        }
    }

    #[test]
    fn theta_spectral_derivative_on_sphere() {
        let j = Spin::from_f64(2.0).unwrap();
        let grid = build_sphere_grid(j, 12, 12).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| x.theta().cos().powi(3));
        let df = grid.deriv_axis1(f.values(), DerivScheme::Spectral);
        for i1 in 0..grid.shape().0 {
            let th = grid.axis1()[i1];
            let expected = -3.0 * th.cos().powi(2) * th.sin();
            let got = df[grid.index(i1, 0)].re;
            assert!((got - expected).abs() < 1e-9, "θ={th}: {got} vs {expected}");
        }
    }

    #[test]
    fn grid_function_algebra() {
        let grid = build_plane_grid(2.0, 10, 8).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| x.q());
        let g = GridFunction::from_real_fn(&grid, |x| x.p());
        let sum = f.add(&g).unwrap();
        let expect = GridFunction::from_real_fn(&grid, |x| x.q() + x.p());
        assert!(sum.sub(&expect).unwrap().sup_norm() < 1e-14);

        let other = build_plane_grid(2.0, 10, 8).unwrap();
        let h = GridFunction::constant(&other, C64::ONE);
        assert!(f.add(&h).is_err(), "distinct grids must not mix");
    }
}
