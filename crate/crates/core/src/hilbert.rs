//! Dense complex operator algebra in finite-dimensional Hilbert spaces.
//!
//! Provides the truncated-Fock and spin-j constructions used by every other
//! module:
//!
//! - annihilation operator `a |n⟩ = √n |n-1⟩` and the displacement
//!   `D(α) = exp(α a† − ᾱ a)`;
//! - SU(2) generators `Jx, Jy, Jz` in dimension `2j+1` and the rotation
//!   `R(θ,φ) = exp(−iφ Jz) · exp(−iθ Jy)`;
//! - commutators, unitary conjugation and entrywise defect norms.
//!
//! All plane-system identities are only reliable on a top-left block of the
//! truncated space; [`reliable_block`] gives the default block size.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Default reliable block for truncated-Fock identities: top-left `dim/2`.
pub fn reliable_block(dim: usize) -> usize {
    dim / 2
}

/* Operator *******************************************************************/

/// Dense complex square matrix representing an operator in a finite
/// orthonormal basis (truncated Fock or spin-j).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    /// Wrap a square matrix. Panics on non-square or non-finite entries.
    pub fn new(mat: DMatrix<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator matrix must be square");
        assert!(
            mat.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
            "operator entries must be finite"
        );
        Self { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim) }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Diagonal operator from the given entries.
    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, |i, j| if i == j { entries[i] } else { C64::ZERO })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Hermitian adjoint `A†`.
    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { mat: self.mat.map(|x| x * c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { mat: &self.mat - &other.mat })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { mat: &self.mat * &other.mat })
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim() != v.dim() {
            return Err(Error::DimensionMismatch(self.dim(), v.dim()));
        }
        Ok(StateVector::new(&self.mat * v.vector()))
    }

    /// Keep the top-left `block`×`block` corner, zero elsewhere.
    pub fn truncated(&self, block: usize) -> Self {
        let b = block.min(self.dim());
        Self::from_fn(self.dim(), |i, j| {
            if i < b && j < b { self.mat[(i, j)] } else { C64::ZERO }
        })
    }

    /// Top-left `block`×`block` corner as an operator of dimension `block`.
    pub fn corner(&self, block: usize) -> Self {
        let b = block.min(self.dim());
        Self::from_fn(b, |i, j| self.mat[(i, j)])
    }

    /// Max entrywise departure from the identity on a top-left block.
    pub fn identity_defect(&self, block: Option<usize>) -> f64 {
        let id = Self::identity(self.dim());
        defect_norm(self, &id, block).unwrap_or(f64::INFINITY)
    }

    /// Max entrywise departure from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        defect_norm(self, &self.adjoint(), None).unwrap_or(f64::INFINITY)
    }

    /// `U U† − I` defect on the top-left block; small for operators unitary
    /// away from the truncation edge.
    pub fn unitarity_defect(&self, block: Option<usize>) -> f64 {
        let prod = self.mul(&self.adjoint()).expect("same dims");
        prod.identity_defect(block)
    }

    /// Eigenvalues of a Hermitian operator, ascending. The caller asserts
    /// hermiticity; only the Hermitian part is seen by the solver.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()).map(|c| c * 0.5);
        let mut eig: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eig
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.dim();
        let row = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&self.mat[(i, j)])).collect())
                .collect()
        };
        serde_json::json!({
            "dim": n,
            "re": row(|c| c.re),
            "im": row(|c| c.im),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: OperatorJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Serialization(e.to_string()))?;
        parsed.into_operator()
    }
}

/// Wire format for operator dumps: `{"dim": n, "re": [[..]], "im": [[..]]}`,
/// row-major.
#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl OperatorJson {
    fn into_operator(self) -> Result<Operator> {
        let n = self.dim;
        let ok = self.re.len() == n
            && self.im.len() == n
            && self.re.iter().all(|r| r.len() == n)
            && self.im.iter().all(|r| r.len() == n);
        if !ok {
            return Err(Error::Serialization("ragged operator payload".into()));
        }
        Ok(Operator::from_fn(n, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }
}

/* StateVector ****************************************************************/

/// Complex vector in the finite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    vec: DVector<C64>,
}

impl StateVector {
    pub fn new(vec: DVector<C64>) -> Self {
        assert!(vec.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        Self { vec }
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        Self::new(DVector::from_vec(amps))
    }

    /// Basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = C64::ONE;
        Self { vec: v }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.vec
    }

    pub fn get(&self, k: usize) -> C64 {
        self.vec[k]
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    /// Inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.vec.dotc(&other.vec)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { vec: self.vec.map(|c| c / n) }
    }

    /// Rank-1 projector `|v⟩⟨v|`.
    pub fn projector(&self) -> Operator {
        let n = self.dim();
        Operator::from_fn(n, |i, j| self.vec[i] * self.vec[j].conj())
    }
}

/* DensityMatrix **************************************************************/

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    const HERM_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-10;

    /// Validate and wrap. Checks hermiticity, unit trace and positivity.
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > Self::HERM_TOL {
            return Err(Error::Serialization(format!(
                "density matrix not Hermitian: defect {herm:.3e}"
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return Err(Error::Serialization(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let min_eig = op.hermitian_eigenvalues()[0];
        if min_eig < -Self::PSD_TOL {
            return Err(Error::Serialization(format!(
                "density matrix has eigenvalue {min_eig:.3e} < 0"
            )));
        }
        Ok(Self { op })
    }

    /// Pure state `|v⟩⟨v|` from a normalized vector.
    pub fn pure(v: &StateVector) -> Result<Self> {
        Self::new(v.normalized().projector())
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/* Spin ***********************************************************************/

/// Half-integer spin label `j`, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice })
    }

    /// Accepts `j` as a float that must be a positive half-integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if twice < 1.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(twice));
        }
        Ok(Self { twice: twice.round() as u32 })
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// Magnetic quantum number of basis index `k`, ordered `m = j, j-1, …, -j`.
    pub fn m(&self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

/* Constructions **************************************************************/

/// Annihilation operator in the truncated Fock basis: entry `(n-1, n) = √n`.
pub fn annihilation_op(dim: usize) -> Result<Operator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim, 2));
    }
    Ok(Operator::from_fn(dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::ZERO
        }
    }))
}

/// Displacement `D(α) = exp(α a† − ᾱ a)` in the truncated basis.
pub fn displacement(dim: usize, alpha: C64) -> Result<Operator> {
    let a = annihilation_op(dim)?;
    let gen = a.adjoint().scale(alpha).sub(&a.scale(alpha.conj()))?;
    Ok(expm(&gen))
}

/// Angular momentum generators `(Jx, Jy, Jz)` in dimension `2j+1`.
///
/// Basis is ordered by descending `m`; `[Jx, Jy] = i Jz` holds exactly.
pub fn spin_operators(j: Spin) -> (Operator, Operator, Operator) {
    let dim = j.dim();
    let jv = j.value();
    // ladder: J+ |j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩
    let jplus = Operator::from_fn(dim, |i, k| {
        if k == i + 1 {
            let m = j.m(k);
            C64::new((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
        } else {
            C64::ZERO
        }
    });
    let jminus = jplus.adjoint();
    let jx = jplus.add(&jminus).unwrap().scale(C64::new(0.5, 0.0));
    let jy = jplus.sub(&jminus).unwrap().scale(C64::new(0.0, -0.5));
    let jz = Operator::from_fn(dim, |i, k| {
        if i == k { C64::new(j.m(i), 0.0) } else { C64::ZERO }
    });
    (jx, jy, jz)
}

/// Rotation `exp(−iφ Jz) · exp(−iθ Jy)`, unitary in dimension `2j+1`.
pub fn rotation(j: Spin, theta: f64, phi: f64) -> Operator {
    let (_, jy, jz) = spin_operators(j);
    let rz = expm(&jz.scale(-I * C64::new(phi, 0.0)));
    let ry = expm(&jy.scale(-I * C64::new(theta, 0.0)));
    rz.mul(&ry).unwrap()
}

/// Commutator `[A, B] = AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Unitary conjugation `U A U†`.
pub fn conjugate_by(u: &Operator, a: &Operator) -> Result<Operator> {
    u.mul(a)?.mul(&u.adjoint())
}

/// Max absolute entrywise difference over a top-left block (whole matrix
/// when `block` is `None`). Entrywise max is the primary comparison norm
/// because truncation artifacts are local.
pub fn defect_norm(a: &Operator, b: &Operator, block: Option<usize>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let n = block.unwrap_or(a.dim()).min(a.dim());
    let mut max = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            max = max.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    Ok(max)
}

/// Frobenius norm of the difference over the same block, reported alongside
/// the entrywise max.
pub fn frobenius_defect(a: &Operator, b: &Operator, block: Option<usize>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let n = block.unwrap_or(a.dim()).min(a.dim());
    let mut sum = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            sum += (a.get(i, j) - b.get(i, j)).norm_sqr();
        }
    }
    Ok(sum.sqrt())
}

/* Matrix exponential *********************************************************/

/// Matrix exponential by scaling-and-squaring with the [13/13] Padé
/// approximant. Accurate to ~1e-13 in the range of norms used here
/// (anti-Hermitian generators up to a few hundred rows).
pub fn expm(a: &Operator) -> Operator {
    // Padé coefficients for the [13/13] approximant to exp.
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;

    let n = a.dim();
    let norm1 = one_norm(a.matrix());
    let s = if norm1 > THETA_13 {
        (norm1 / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5_f64.powi(s), 0.0));
    let m = scaled.matrix();

    let id = DMatrix::<C64>::identity(n, n);
    let m2 = m * m;
    let m4 = &m2 * &m2;
    let m6 = &m4 * &m2;

    let u_inner = &m6 * (&m6.map(|c| c * B[13]) + &m4.map(|c| c * B[11]) + &m2.map(|c| c * B[9]))
        + &m6.map(|c| c * B[7])
        + &m4.map(|c| c * B[5])
        + &m2.map(|c| c * B[3])
        + &id.map(|c| c * B[1]);
    let u = m * u_inner;
    let v = &m6 * (&m6.map(|c| c * B[12]) + &m4.map(|c| c * B[10]) + &m2.map(|c| c * B[8]))
        + &m6.map(|c| c * B[6])
        + &m4.map(|c| c * B[4])
        + &m2.map(|c| c * B[2])
        + &id.map(|c| c * B[0]);

    let num = &v + &u;
    let den = &v - &u;
    let mut result = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is invertible for scaled input");
    for _ in 0..s {
        result = &result * &result;
    }
    Operator::new(result)
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    let (rows, cols) = m.shape();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn annihilation_smallest() {
        let a = annihilation_op(2).unwrap();
        assert_eq!(a.get(0, 1), c(1.0, 0.0));
        assert_eq!(a.get(0, 0), C64::ZERO);
        assert_eq!(a.get(1, 0), C64::ZERO);
        assert_eq!(a.get(1, 1), C64::ZERO);
    }

    #[test]
    fn annihilation_entry_sqrt3() {
        let a = annihilation_op(4).unwrap();
        assert!((a.get(2, 3) - c(3.0_f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn annihilation_rejects_dim_one() {
        assert!(matches!(annihilation_op(1), Err(Error::InvalidDimension(1, 2))));
    }

    #[test]
    fn canonical_commutator_is_identity_on_interior() {
        let dim = 12;
        let a = annihilation_op(dim).unwrap();
        let comm = commutator(&a, &a.adjoint()).unwrap();
        let defect = defect_norm(&comm, &Operator::identity(dim), Some(dim - 1)).unwrap();
        assert!(defect < 1e-14, "defect {defect}");
    }

    #[test]
    fn displacement_zero_is_identity() {
        let d = displacement(8, C64::ZERO).unwrap();
        assert!(d.identity_defect(None) < 1e-14);
    }

    #[test]
    fn displacement_vacuum_element() {
        // ⟨0|D(1)|0⟩ = e^{-1/2}; Taylor-series value frozen below.
        let d = displacement(30, c(1.0, 0.0)).unwrap();
        let expected = 0.6065306597126334;
        assert!((d.get(0, 0) - c(expected, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn displacement_unitary_on_interior_block() {
        let d = displacement(30, c(1.0, 0.0)).unwrap();
        assert!(d.unitarity_defect(Some(15)) < 1e-8);
    }

    #[test]
    fn spin_half_jz() {
        let j = Spin::from_f64(0.5).unwrap();
        let (_, _, jz) = spin_operators(j);
        assert!((jz.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((jz.get(1, 1) - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_commutation_relation() {
        for twice in 1..=20 {
            let j = Spin::from_twice(twice).unwrap();
            let (jx, jy, jz) = spin_operators(j);
            let lhs = commutator(&jx, &jy).unwrap();
            let rhs = jz.scale(I);
            let defect = defect_norm(&lhs, &rhs, None).unwrap();
            assert!(defect < 1e-13, "j = {}: defect {defect}", j.value());
        }
    }

    #[test]
    fn jz_traceless() {
        for twice in [1, 2, 5, 9] {
            let (_, _, jz) = spin_operators(Spin::from_twice(twice).unwrap());
            assert!(jz.trace().norm() < 1e-13);
        }
    }

    #[test]
    fn spin_rejects_non_half_integer() {
        assert!(Spin::from_f64(0.7).is_err());
        assert!(Spin::from_f64(0.0).is_err());
        assert!(Spin::from_f64(-1.0).is_err());
    }

    #[test]
    fn rotation_zero_is_identity() {
        let j = Spin::from_f64(2.0).unwrap();
        let r = rotation(j, 0.0, 0.0);
        assert!(r.identity_defect(None) < 1e-13);
    }

    #[test]
    fn rotation_unitary() {
        let j = Spin::from_f64(5.0).unwrap();
        let r = rotation(j, 1.1, 2.3);
        assert!(r.unitarity_defect(None) < 1e-12);
    }

    #[test]
    fn commutator_of_self_vanishes() {
        let a = annihilation_op(6).unwrap();
        let z = commutator(&a, &a).unwrap();
        assert!(defect_norm(&z, &Operator::zeros(6), None).unwrap() == 0.0);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = annihilation_op(4).unwrap();
        let b = annihilation_op(5).unwrap();
        assert!(commutator(&a, &b).is_err());
    }

    #[test]
    fn conjugation_by_identity() {
        let a = annihilation_op(5).unwrap();
        let u = Operator::identity(5);
        let out = conjugate_by(&u, &a).unwrap();
        assert!(defect_norm(&out, &a, None).unwrap() < 1e-15);
    }

    #[test]
    fn conjugation_preserves_trace_and_spectrum() {
        let j = Spin::from_f64(3.0).unwrap();
        let (jx, _, jz) = spin_operators(j);
        let u = rotation(j, 0.7, 1.9);
        let out = conjugate_by(&u, &jx).unwrap();
        assert!((out.trace() - jx.trace()).norm() < 1e-10);
        let before = jx.hermitian_eigenvalues();
        let after = out.hermitian_eigenvalues();
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn defect_norm_basics() {
        let id = Operator::identity(3);
        let zero = Operator::zeros(3);
        assert_eq!(defect_norm(&id, &id, None).unwrap(), 0.0);
        assert_eq!(defect_norm(&id, &zero, Some(1)).unwrap(), 1.0);
        assert_eq!(
            defect_norm(&id, &zero, None).unwrap(),
            defect_norm(&zero, &id, None).unwrap()
        );
    }

    #[test]
    fn displacement_composition_phase() {
        // D(α)D(β) = e^{i Im(α β̄)} D(α+β) on the interior half-block.
        let dim = 30;
        let block = reliable_block(dim);
        let cases = [
            (c(0.4, 0.3), c(-0.2, 0.8)),
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(-0.6, -0.6), c(0.5, -0.1)),
        ];
        for (alpha, beta) in cases {
            let lhs = displacement(dim, alpha)
                .unwrap()
                .mul(&displacement(dim, beta).unwrap())
                .unwrap();
            let phase = (alpha * beta.conj()).im;
            let rhs = displacement(dim, alpha + beta)
                .unwrap()
                .scale(C64::from_polar(1.0, phase));
            let defect = defect_norm(&lhs, &rhs, Some(block)).unwrap();
            assert!(defect < 1e-6, "α={alpha} β={beta}: defect {defect}");
        }
    }

    #[test]
    fn expm_matches_diagonal_exponential() {
        let diag = Operator::diagonal(&[c(0.3, 1.2), c(-0.7, 0.0), c(0.0, -2.5)]);
        let e = expm(&diag);
        for k in 0..3 {
            let expected = diag.get(k, k).exp();
            assert!((e.get(k, k) - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn operator_json_round_trip() {
        let a = displacement(5, c(0.3, -0.4)).unwrap();
        let json = a.to_json();
        let back = Operator::from_json(&json).unwrap();
        assert!(defect_norm(&a, &back, None).unwrap() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        let v = StateVector::basis(4, 1);
        let rho = DensityMatrix::pure(&v).unwrap();
        assert_eq!(rho.dim(), 4);
        // non-unit trace rejected
        let bad = Operator::identity(4);
        assert!(DensityMatrix::new(bad).is_err());
    }
}
