//! 2x2 complex linear algebra for qubit states.
//!
//! Spherical coordinates follow the usual physics convention
//! `x = r sin(theta) cos(phi)`, `y = r sin(theta) sin(phi)`, `z = r cos(theta)`.
//! A frequently reproduced form of the qubit parameterization writes
//! `y = r sin(theta) cos(phi)`; that duplicates the `x` formula and is not used
//! here. The Bloch-ball densities in [`crate::measures`] are only consistent
//! with the `sin(phi)` form.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of the closed unit ball, i.e. a qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// Builds a Bloch vector, rejecting points outside the unit ball
    /// (with [`tol::BLOCH_NORM`] slack) or with non-finite coordinates.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(invalid("Bloch coordinates must be finite"));
        }
        let r2 = x * x + y * y + z * z;
        if r2 > (1.0 + tol::BLOCH_NORM).powi(2) {
            return Err(invalid(format!(
                "Bloch vector norm {} exceeds 1",
                r2.sqrt()
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Builds a Bloch vector from spherical coordinates `(r, theta, phi)`.
    pub fn from_spherical(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0 + tol::BLOCH_NORM).contains(&r) {
            return Err(invalid(format!("radius {r} outside [0, 1]")));
        }
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(r * st * cp, r * st * sp, r * ct)
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0, z: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Polar angle in `[0, pi]`; zero at the origin.
    pub fn theta(&self) -> f64 {
        let r = self.r();
        if r == 0.0 {
            0.0
        } else {
            (self.z / r).clamp(-1.0, 1.0).acos()
        }
    }

    /// Azimuth in `[0, 2pi)`; zero on the z-axis.
    pub fn phi(&self) -> f64 {
        wrap_angle(self.y.atan2(self.x))
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Maps an angle into `[0, 2pi)`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A 2x2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Matrix2C {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    /// Builds a matrix from real entries.
    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Self::real(d1, 0.0, 0.0, d2)
    }

    /// The maximally mixed state `I/2`.
    pub fn maximally_mixed() -> Self {
        Self::diag(0.5, 0.5)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Hermitian, unit trace and every eigenvalue at least `-tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        self.density_defect(tol).is_none()
    }

    /// Describes why the matrix fails [`Matrix2C::is_density`], if it does.
    fn density_defect(&self, tol: f64) -> Option<String> {
        if !self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Some("non-finite entries".into());
        }
        let h = self.hermiticity_defect();
        if h > tol {
            return Some(format!("Hermiticity defect {h:e}"));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Some(format!("trace {tr} differs from 1"));
        }
        let (_, lo) = hermitian_eigenvalues(self);
        if lo < -tol {
            return Some(format!("negative eigenvalue {lo:e}"));
        }
        None
    }
}

impl Add for Matrix2C {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Matrix2C {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Mul for Matrix2C {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl fmt::Display for Matrix2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

/// Euler angles of an SU(2) element, `U = e^{-i alpha s3/2} e^{-i beta s2/2} e^{-i gamma s3/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl EulerAngles {
    /// `alpha, gamma` in `[0, 2pi)` and `beta` in `[0, pi]`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&alpha) {
            return Err(invalid(format!("alpha = {alpha} outside [0, 2pi)")));
        }
        if !(0.0..=PI).contains(&beta) {
            return Err(invalid(format!("beta = {beta} outside [0, pi]")));
        }
        if !(0.0..TAU).contains(&gamma) {
            return Err(invalid(format!("gamma = {gamma} outside [0, 2pi)")));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Spectral decomposition `m = U diag(d1, d2) U^dagger` with `d1 >= d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectral2 {
    pub d1: f64,
    pub d2: f64,
    pub u: Matrix2C,
}

impl Spectral2 {
    pub fn reconstruct(&self) -> Matrix2C {
        self.u * Matrix2C::diag(self.d1, self.d2) * self.u.adjoint()
    }
}

/// `rho = (I + x s1 + y s2 + z s3) / 2`.
pub fn bloch_to_matrix(b: &BlochVector) -> Matrix2C {
    Matrix2C::new(
        Complex64::new(0.5 * (1.0 + b.z), 0.0),
        Complex64::new(0.5 * b.x, -0.5 * b.y),
        Complex64::new(0.5 * b.x, 0.5 * b.y),
        Complex64::new(0.5 * (1.0 - b.z), 0.0),
    )
}

/// Inverse of [`bloch_to_matrix`].
///
/// A density matrix accepted at [`tol::STRUCTURE`] may sit a hair outside the
/// ball; such vectors are projected back onto the unit sphere.
pub fn matrix_to_bloch(m: &Matrix2C) -> Result<BlochVector> {
    if let Some(why) = m.density_defect(tol::STRUCTURE) {
        return Err(Error::NotADensityMatrix(why));
    }
    // average the two off-diagonal entries so tiny asymmetries cancel
    let off = 0.5 * (m.a21 + m.a12.conj());
    let (mut x, mut y, mut z) = (2.0 * off.re, 2.0 * off.im, (m.a11 - m.a22).re);
    let r = (x * x + y * y + z * z).sqrt();
    if r > 1.0 {
        x /= r;
        y /= r;
        z /= r;
    }
    BlochVector::new(x, y, z)
}

/// Closed-form eigenvalues `(largest, smallest)` of the Hermitian part of `m`.
fn hermitian_eigenvalues(m: &Matrix2C) -> (f64, f64) {
    let a = m.a11.re;
    let d = m.a22.re;
    let b = 0.5 * (m.a12 + m.a21.conj());
    let mean = 0.5 * (a + d);
    let half_gap = (0.5 * (a - d)).hypot(b.norm());
    (mean + half_gap, mean - half_gap)
}

/// Spectral decomposition of a Hermitian 2x2 matrix.
///
/// Eigenvalues come back in descending order. When the gap is below
/// [`tol::DEGENERATE_GAP`] the eigenvector matrix is the identity. The
/// eigenvector matrix always has unit determinant.
pub fn eigendecompose(m: &Matrix2C) -> Result<Spectral2> {
    let defect = m.hermiticity_defect();
    if defect > tol::STRUCTURE || defect.is_nan() {
        return Err(Error::NotHermitian(defect));
    }
    let a = m.a11.re;
    let d = m.a22.re;
    // b = m12; the (2,1) entry is its conjugate up to the tolerance above
    let b = 0.5 * (m.a12 + m.a21.conj());
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let bn = b.norm();
    let h = half_diff.hypot(bn);
    let (d1, d2) = (mean + h, mean - h);

    if h <= tol::DEGENERATE_GAP {
        return Ok(Spectral2 { d1, d2, u: Matrix2C::identity() });
    }

    // m = mean I + h (n . sigma), with n = (Re b, -Im b, (a - d)/2) / h.
    // Top eigenvector (cos(t/2), e^{i phi} sin(t/2)); e^{i phi} = conj(b)/|b|.
    let nz = (half_diff / h).clamp(-1.0, 1.0);
    let sin_t = (bn / h).clamp(0.0, 1.0);
    let (c, s) = if nz >= 0.0 {
        let c = ((1.0 + nz) * 0.5).sqrt();
        (c, sin_t / (2.0 * c))
    } else {
        let s = ((1.0 - nz) * 0.5).sqrt();
        (sin_t / (2.0 * s), s)
    };
    let phase = if bn > 0.0 { b.conj() / bn } else { ONE };
    let u = Matrix2C::new(
        Complex64::new(c, 0.0),
        -phase.conj() * s,
        phase * s,
        Complex64::new(c, 0.0),
    );
    Ok(Spectral2 { d1, d2, u })
}

/// The SU(2) element with the given Euler angles, written out entrywise.
pub fn su2_from_euler(e: &EulerAngles) -> Matrix2C {
    su2_from_angles(e.alpha, e.beta, e.gamma)
}

/// Same as [`su2_from_euler`] without range validation.
pub(crate) fn su2_from_angles(alpha: f64, beta: f64, gamma: f64) -> Matrix2C {
    let (s, c) = (0.5 * beta).sin_cos();
    let ea = Complex64::from_polar(1.0, -0.5 * alpha);
    let eg = Complex64::from_polar(1.0, -0.5 * gamma);
    Matrix2C::new(
        ea * eg * c,
        -(ea * eg.conj()) * s,
        ea.conj() * eg * s,
        ea.conj() * eg.conj() * c,
    )
}

/// `U f(D) U^dagger`, where `f` acts on each eigenvalue of the Hermitian `m`.
///
/// `f` signals out-of-domain eigenvalues by returning an error.
pub fn apply_matrix_function<F>(mut f: F, m: &Matrix2C) -> Result<Matrix2C>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sp = eigendecompose(m)?;
    let f1 = f(sp.d1)?;
    let f2 = f(sp.d2)?;
    if !(f1.is_finite() && f2.is_finite()) {
        return Err(domain("matrix function is not finite on the spectrum"));
    }
    Ok(sp.u * Matrix2C::diag(f1, f2) * sp.u.adjoint())
}

/// `u m u^dagger` for unitary `u`.
pub fn conjugate(u: &Matrix2C, m: &Matrix2C) -> Result<Matrix2C> {
    let defect = u.unitarity_defect();
    if defect > tol::STRUCTURE || defect.is_nan() {
        return Err(Error::NotUnitary(defect));
    }
    Ok(*u * *m * u.adjoint())
}
