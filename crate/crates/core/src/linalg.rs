//! Dense complex matrices of fixed size.
//!
//! Only the 2×2 (single qubit) and 4×4 (two qubit) cases are used. Storage is
//! a row-major array, so every value is `Copy` and products never allocate.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Tolerance used by structural predicates when the caller has no better value.
pub const DEFAULT_TOL: f64 = 1e-12;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Row-major `N×N` complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type CMat2 = CMat<2>;
pub type CMat4 = CMat<4>;

/// Column vector of length `N`.
pub type CVec<const N: usize> = [C64; N];

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[C64::new(0.0, 0.0); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: [[C64; N]; N]) -> Self {
        CMat(rows)
    }

    pub fn diag(entries: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, e) in entries.into_iter().enumerate() {
            m.0[i][i] = e;
        }
        m
    }

    /// `|v⟩⟨u|`
    pub fn outer(v: &CVec<N>, u: &CVec<N>) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| v[i] * u[j].conj())))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn apply(&self, v: &CVec<N>) -> CVec<N> {
        let mut out = [C64::new(0.0, 0.0); N];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..N {
            for k in 0..N {
                acc += self.0[i][k] * other.0[k][i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    /// `‖M·M† − I‖∞ ≤ tol`
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_finite() && (*self * self.adjoint() - Self::identity()).max_abs() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_finite() && (*self - self.adjoint()).max_abs() <= tol
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        (*self * *self - *self).max_abs() <= tol
    }

    /// Copy into a dynamically sized nalgebra matrix (used for eigen problems).
    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_fn(N, N, |i, j| self.0[i][j])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (self.to_dmatrix() + self.to_dmatrix().adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return false;
        }
        self.hermitian_eigenvalues().first().is_none_or(|&e| e >= -tol)
    }
}

impl CMat4 {
    /// View as a nalgebra fixed-size matrix.
    pub fn to_matrix4(&self) -> Matrix4<C64> {
        Matrix4::from_fn(|i, j| self.0[i][j])
    }
}

/// Kronecker product `A ⊗ B`; the first factor acts on the first (early) qubit.
pub fn tensor(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut m = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Kronecker product of two single-qubit vectors.
pub fn tensor_vec(a: &CVec<2>, b: &CVec<2>) -> CVec<4> {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// `⟨u|v⟩`
pub fn inner<const N: usize>(u: &CVec<N>, v: &CVec<N>) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl<const N: usize> fmt::Debug for CMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat{N}[")?;
        for row in &self.0 {
            write!(f, " ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
