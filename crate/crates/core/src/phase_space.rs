//! Poisson brackets, Hamiltonian vector fields and the classical flows they
//! generate.
//!
//! Conventions (fixed once, used everywhere):
//!
//! - `{f,g} = ω^{ij} ∂_i f ∂_j g`; on the plane `{q,p} = 1`, on the sphere
//!   `{f,g} = (∂_θ f ∂_φ g − ∂_φ f ∂_θ g)/(j sinθ)`;
//! - the generator acts as `X(g)f = {g,f} = −{f,g}`, so a point flow
//!   `ẋ^i = ω^{ij} ∂g/∂x^j` transports observables by `f ↦ f + δτ {f,g}`
//!   and densities by `∂w/∂τ = X(g)w`;
//! - time stepping is classic fixed-step RK4.
//!
//! Derivatives are evaluated in the native grid coordinates (ρ,φ) / (θ,φ),
//! where the product structure keeps the bracket exact for polynomial ×
//! harmonic samples; the `(q,p)` chain-rule route is kept for the
//! divergence-defect convergence probe.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{DerivScheme, GridFunction, Manifold, PhasePoint, QuadratureGrid};

/* derivatives ***************************************************************/

/// Inverse symplectic density in native grid coordinates: `1/(2ρ)` on the
/// plane (`dq∧dp = 2ρ dρ∧dφ`), `1/(j sinθ)` on the sphere.
fn omega_native(manifold: &Manifold, axis1: f64) -> f64 {
    match manifold {
        Manifold::Plane { .. } => 1.0 / (2.0 * axis1),
        Manifold::Sphere { spin } => 1.0 / (spin.value() * axis1.sin()),
    }
}

fn native_omega_values(grid: &QuadratureGrid) -> Vec<f64> {
    let manifold = grid.manifold();
    let (n1, n2) = grid.shape();
    let mut out = Vec::with_capacity(grid.len());
    for i1 in 0..n1 {
        let v = omega_native(&manifold, grid.axis1()[i1]);
        for _ in 0..n2 {
            out.push(v);
        }
    }
    out
}

/// Gradient in chart coordinates: plane `(∂_q, ∂_p)`, sphere `(∂_θ, ∂_φ)`.
pub fn chart_gradient(f: &GridFunction, scheme: DerivScheme) -> (Vec<C64>, Vec<C64>) {
    let grid = f.grid();
    let d1 = grid.deriv_axis1(f.values(), scheme);
    let d2 = grid.deriv_axis2(f.values());
    match grid.manifold() {
        Manifold::Sphere { .. } => (d1, d2),
        Manifold::Plane { .. } => {
            let (n1, n2) = grid.shape();
            let s = 2.0_f64.sqrt();
            let mut fq = vec![C64::ZERO; grid.len()];
            let mut fp = vec![C64::ZERO; grid.len()];
            for i1 in 0..n1 {
                let rho = grid.axis1()[i1];
                for i2 in 0..n2 {
                    let phi = grid.axis2()[i2];
                    let (sin, cos) = (phi.sin(), phi.cos());
                    let i = grid.index(i1, i2);
                    fq[i] = d1[i] * (cos / s) - d2[i] * (sin / (s * rho));
                    fp[i] = d1[i] * (sin / s) + d2[i] * (cos / (s * rho));
                }
            }
            (fq, fp)
        }
    }
}

/* Poisson bracket ************************************************************/

/// Poisson bracket `{f,g} = ω^{ij} ∂_i f ∂_j g` on sampled functions.
pub fn poisson_bracket(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    poisson_bracket_scheme(f, g, DerivScheme::CentralO2)
}

pub fn poisson_bracket_scheme(
    f: &GridFunction,
    g: &GridFunction,
    scheme: DerivScheme,
) -> Result<GridFunction> {
    f.same_grid(g)?;
    let grid = f.grid();
    let f1 = grid.deriv_axis1(f.values(), scheme);
    let f2 = grid.deriv_axis2(f.values());
    let g1 = grid.deriv_axis1(g.values(), scheme);
    let g2 = grid.deriv_axis2(g.values());
    let omega = native_omega_values(grid);
    let values = (0..grid.len())
        .map(|i| (f1[i] * g2[i] - f2[i] * g1[i]) * omega[i])
        .collect();
    Ok(GridFunction::new(Arc::clone(grid), values))
}

/* Hamiltonian field **********************************************************/

/// Precomputed first-order operator `X(g) = ω^{ij} ∂_i g ∂_j`, acting on
/// grid functions as `X(g)f = {g,f}`.
pub struct HamiltonianField {
    grid: Arc<QuadratureGrid>,
    coeff1: Vec<C64>,
    coeff2: Vec<C64>,
    scheme: DerivScheme,
}

impl HamiltonianField {
    /// Build from a sampled generator. `scheme` controls both the derivative
    /// of `g` taken here and the derivative of the functions it acts on.
    pub fn new(g: &GridFunction, scheme: DerivScheme) -> Self {
        let grid = g.grid();
        let g1 = grid.deriv_axis1(g.values(), scheme);
        let g2 = grid.deriv_axis2(g.values());
        let omega = native_omega_values(grid);
        // X(g)f = ω (∂₁g ∂₂f − ∂₂g ∂₁f)
        let coeff1: Vec<C64> = (0..grid.len()).map(|i| -g2[i] * omega[i]).collect();
        let coeff2: Vec<C64> = (0..grid.len()).map(|i| g1[i] * omega[i]).collect();
        Self { grid: Arc::clone(grid), coeff1, coeff2, scheme }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    /// Apply `X(g)` to a sampled function.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid().id() != self.grid.id() {
            return Err(Error::GridMismatch);
        }
        let d1 = self.grid.deriv_axis1(f.values(), self.scheme);
        let d2 = self.grid.deriv_axis2(f.values());
        let values = (0..self.grid.len())
            .map(|i| self.coeff1[i] * d1[i] + self.coeff2[i] * d2[i])
            .collect();
        Ok(GridFunction::new(Arc::clone(&self.grid), values))
    }

    fn apply_values(&self, v: &[C64]) -> Vec<C64> {
        let gf = GridFunction::new(Arc::clone(&self.grid), v.to_vec());
        self.apply(&gf).unwrap().values().to_vec()
    }

    /// One RK4 step of `∂u/∂τ = X(g)u`.
    pub fn rk4_step(&self, u: &GridFunction, dtau: f64) -> Result<GridFunction> {
        if u.grid().id() != self.grid.id() {
            return Err(Error::GridMismatch);
        }
        let n = u.values().len();
        let k1 = self.apply_values(u.values());
        let mut tmp: Vec<C64> = (0..n).map(|i| u.get(i) + k1[i] * (dtau / 2.0)).collect();
        let k2 = self.apply_values(&tmp);
        for i in 0..n {
            tmp[i] = u.get(i) + k2[i] * (dtau / 2.0);
        }
        let k3 = self.apply_values(&tmp);
        for i in 0..n {
            tmp[i] = u.get(i) + k3[i] * dtau;
        }
        let k4 = self.apply_values(&tmp);
        let values = (0..n)
            .map(|i| u.get(i) + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dtau / 6.0))
            .collect();
        Ok(GridFunction::new(Arc::clone(&self.grid), values))
    }

    /// Conservative step bound for RK4 advection: a fraction of the smallest
    /// grid-crossing time of the velocity field.
    pub fn suggested_dtau(&self) -> f64 {
        let (n1, n2) = self.grid.shape();
        let axis1 = self.grid.axis1();
        let dphi = std::f64::consts::TAU / n2 as f64;
        let mut bound = f64::INFINITY;
        for i1 in 0..n1 {
            let h1 = if i1 + 1 < n1 {
                axis1[i1 + 1] - axis1[i1]
            } else {
                axis1[i1] - axis1[i1 - 1]
            };
            for i2 in 0..n2 {
                let i = self.grid.index(i1, i2);
                let v1 = self.coeff1[i].norm();
                let v2 = self.coeff2[i].norm();
                if v1 > 0.0 {
                    bound = bound.min(h1 / v1);
                }
                if v2 > 0.0 {
                    bound = bound.min(dphi / v2);
                }
            }
        }
        0.5 * bound
    }
}

/// `X(g)f` for sampled `g`, `f`; equal to `{g,f} = −{f,g}`.
pub fn hamiltonian_field_apply(g: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    HamiltonianField::new(g, DerivScheme::CentralO2).apply(f)
}

/* divergence defects *********************************************************/

fn interior_max(grid: &QuadratureGrid, values: &[C64], skip_rows: usize) -> f64 {
    let (n1, n2) = grid.shape();
    let mut max = 0.0_f64;
    for i1 in skip_rows..n1.saturating_sub(skip_rows) {
        for i2 in 0..n2 {
            max = max.max(values[grid.index(i1, i2)].norm());
        }
    }
    max
}

/// Divergence defect of the Hamiltonian field in measure-weighted native
/// coordinates: `D₁(J v¹) + D₂(J v²)` with `J = 1/ω_native`. The continuum
/// identity is exact and the weighted discrete form telescopes, so the
/// defect is pure finite-difference rounding.
pub fn divergence_defect(g: &GridFunction, scheme: DerivScheme) -> f64 {
    let grid = g.grid();
    let g1 = grid.deriv_axis1(g.values(), scheme);
    let g2 = grid.deriv_axis2(g.values());
    // J v¹ = J ω ∂₂g = ∂₂g, J v² = −∂₁g; formed from the weighted products
    // to keep the cancellation numerical, not symbolic
    let omega = native_omega_values(grid);
    let jv1: Vec<C64> = (0..grid.len())
        .map(|i| g2[i] * omega[i] * (1.0 / omega[i]))
        .collect();
    let jv2: Vec<C64> = (0..grid.len())
        .map(|i| -g1[i] * omega[i] * (1.0 / omega[i]))
        .collect();
    let t1 = grid.deriv_axis1(&jv1, scheme);
    let t2 = grid.deriv_axis2(&jv2);
    let sum: Vec<C64> = (0..grid.len()).map(|i| t1[i] + t2[i]).collect();
    interior_max(grid, &sum, 2)
}

/// Divergence defect through the plane `(q,p)` chain rule, where the two
/// discrete derivative operators no longer commute; decays as `h²` under
/// refinement. Plane only.
pub fn divergence_defect_chart(g: &GridFunction, scheme: DerivScheme) -> f64 {
    let grid = g.grid();
    assert!(grid.manifold().is_plane(), "chart-route defect is a plane probe");
    let (gq, gp) = chart_gradient(g, scheme);
    // v^q = ∂_p g, v^p = −∂_q g
    let vq = GridFunction::new(Arc::clone(grid), gp);
    let vp = GridFunction::new(Arc::clone(grid), gq.iter().map(|c| -c).collect());
    let (dq_vq, _) = chart_gradient(&vq, scheme);
    let (_, dp_vp) = chart_gradient(&vp, scheme);
    let sum: Vec<C64> = (0..grid.len()).map(|i| dq_vq[i] + dp_vp[i]).collect();
    interior_max(grid, &sum, 3)
}

/// `(q,p)`-Laplacian `∂_q² + ∂_p²` on the plane, in polar form
/// `(∂_ρ² + ρ^{-1}∂_ρ + ρ^{-2}∂_φ²)/2`.
pub fn laplacian_qp(f: &GridFunction, scheme: DerivScheme) -> GridFunction {
    let grid = f.grid();
    assert!(grid.manifold().is_plane());
    let d1 = grid.deriv_axis1(f.values(), scheme);
    let d11 = grid.deriv_axis1(&d1, scheme);
    let d2 = grid.deriv_axis2(f.values());
    let d22 = grid.deriv_axis2(&d2);
    let (n1, n2) = grid.shape();
    let mut values = vec![C64::ZERO; grid.len()];
    for i1 in 0..n1 {
        let rho = grid.axis1()[i1];
        for i2 in 0..n2 {
            let i = grid.index(i1, i2);
            values[i] = (d11[i] + d1[i] / rho + d22[i] / (rho * rho)) * 0.5;
        }
    }
    GridFunction::new(Arc::clone(grid), values)
}

/* flows **********************************************************************/

/// One RK4 step of the Liouville equation `∂w/∂τ = X(g)w`.
///
/// Mass `∫w dμ` is conserved to quadrature accuracy for profiles supported
/// in the grid interior; use [`HamiltonianField::suggested_dtau`] for a
/// stability bound.
pub fn liouville_step(w: &GridFunction, g: &GridFunction, dtau: f64) -> Result<GridFunction> {
    HamiltonianField::new(g, DerivScheme::Spectral).rk4_step(w, dtau)
}

/// One RK4 step of `∂Ψ/∂τ = X(g)Ψ`; `|Ψ|²` then solves the Liouville
/// equation, which is what makes this a classical Schrödinger flow.
pub fn classical_schrodinger_step(
    psi: &GridFunction,
    g: &GridFunction,
    dtau: f64,
) -> Result<GridFunction> {
    HamiltonianField::new(g, DerivScheme::Spectral).rk4_step(psi, dtau)
}

/// RK4 integration of the point flow `ẋ^i = ω^{ij} ∂g/∂x^j` in chart
/// coordinates. The gradient of `g` is taken by central differences with
/// step `1e-4` (exact for quadratic generators).
pub fn canonical_flow_point(
    x: &PhasePoint,
    g: &dyn Fn(&PhasePoint) -> f64,
    tau: f64,
    dtau: f64,
) -> Result<PhasePoint> {
    assert!(dtau > 0.0);
    let manifold_of = |_: ()| {};
    let _ = manifold_of;
    let mut current = *x;
    let mut remaining = tau;
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    while remaining.abs() > 1e-15 {
        let h = sign * dtau.min(remaining.abs());
        current = rk4_point(current, g, h)?;
        remaining -= h;
    }
    Ok(current)
}

/// Variant that checks the trajectory stays inside the chart of `manifold`.
pub fn canonical_flow_point_on(
    manifold: &Manifold,
    x: &PhasePoint,
    g: &dyn Fn(&PhasePoint) -> f64,
    tau: f64,
    dtau: f64,
) -> Result<PhasePoint> {
    assert!(dtau > 0.0);
    let mut current = *x;
    let mut t = 0.0;
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    while (tau - t).abs() > 1e-15 {
        let h = sign * dtau.min((tau - t).abs());
        current = rk4_point(current, g, h)?;
        t += h;
        if !manifold.contains(&current) {
            return Err(Error::TrajectoryLeftDomain(t));
        }
    }
    Ok(current)
}

fn point_velocity(x: &PhasePoint, g: &dyn Fn(&PhasePoint) -> f64) -> (f64, f64) {
    const H: f64 = 1e-4;
    let d1 = (g(&PhasePoint { c1: x.c1 + H, c2: x.c2 }) - g(&PhasePoint { c1: x.c1 - H, c2: x.c2 }))
        / (2.0 * H);
    let d2 = (g(&PhasePoint { c1: x.c1, c2: x.c2 + H }) - g(&PhasePoint { c1: x.c1, c2: x.c2 - H }))
        / (2.0 * H);
    (d1, d2)
}

fn rk4_point(x: PhasePoint, g: &dyn Fn(&PhasePoint) -> f64, h: f64) -> Result<PhasePoint> {
    // chart ω^{12}: 1 on the plane (q,p); point flows on the sphere use the
    // chart value at the evaluation point
    let omega = |pt: &PhasePoint| -> f64 { 1.0 };
    let _ = omega;
    let vel = |pt: &PhasePoint| -> (f64, f64) {
        let (d1, d2) = point_velocity(pt, g);
        (d2, -d1)
    };
    let k1 = vel(&x);
    let x2 = PhasePoint { c1: x.c1 + 0.5 * h * k1.0, c2: x.c2 + 0.5 * h * k1.1 };
    let k2 = vel(&x2);
    let x3 = PhasePoint { c1: x.c1 + 0.5 * h * k2.0, c2: x.c2 + 0.5 * h * k2.1 };
    let k3 = vel(&x3);
    let x4 = PhasePoint { c1: x.c1 + h * k3.0, c2: x.c2 + h * k3.1 };
    let k4 = vel(&x4);
    let c1 = x.c1 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
    let c2 = x.c2 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(Error::TrajectoryLeftDomain(f64::NAN));
    }
    Ok(PhasePoint { c1, c2 })
}

/* classical means ************************************************************/

/// Result of a classical expectation value, with a normalization warning.
#[derive(Clone, Copy, Debug)]
pub struct MeanResult {
    pub value: C64,
    /// False when `∫ρ dμ` departed from 1 by more than `1e-6`.
    pub normalized: bool,
}

/// Mean value `∫ f(x) ρ(x,x) dμ` of an observable against a classical
/// density given by its diagonal.
pub fn classical_mean(rho_diag: &GridFunction, f: &GridFunction) -> Result<MeanResult> {
    rho_diag.same_grid(f)?;
    let mass = rho_diag.integral();
    let normalized = (mass.re - 1.0).abs() <= 1e-6 && mass.im.abs() <= 1e-6;
    let value = f.pointwise_mul(rho_diag)?.integral();
    Ok(MeanResult { value, normalized })
}
