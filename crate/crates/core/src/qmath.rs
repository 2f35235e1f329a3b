//! Fixed-size complex matrices, Pauli algebra and Bloch-vector conversions.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::scalar::Real;

/// Square complex matrix of compile-time size `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<T, const N: usize>(pub [[Complex<T>; N]; N]);

/// Single-qubit operator.
pub type Mat2<T> = Mat<T, 2>;
/// Two-qubit operator in the basis HH, HV, VH, VV.
pub type Mat4<T> = Mat<T, 4>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

impl<T: Real, const N: usize> Mat<T, N> {
    pub fn zeros() -> Self {
        Mat([[re(T::zero()); N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { re(T::one()) } else { re(T::zero()) })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(a: [[T; N]; N]) -> Self {
        Self::from_fn(|i, j| re(a[i][j]))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(re(T::zero()), |acc, i| acc + self.0[i][i])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// Largest entry modulus of `A - A^†`.
    pub fn hermiticity_residual(&self) -> T {
        let mut r = T::zero();
        for i in 0..N {
            for j in 0..N {
                r = r.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        r
    }

    /// `(A + A^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(|i, j| (self.0[i][j] + self.0[j][i].conj()) * half)
    }

    /// Largest entry modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut r = T::zero();
        for i in 0..N {
            for j in 0..N {
                r = r.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        r
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `A X A^†`.
    pub fn sandwich(&self, x: &Self) -> Self {
        *self * *x * self.adjoint()
    }

    /// Real symmetric `2N x 2N` embedding `[[Re, -Im], [Im, Re]]`.
    fn real_embedding(&self) -> Vec<Vec<T>> {
        let mut e = vec![vec![T::zero(); 2 * N]; 2 * N];
        for i in 0..N {
            for j in 0..N {
                let z = self.0[i][j];
                e[i][j] = z.re;
                e[i + N][j + N] = z.re;
                e[i][j + N] = -z.im;
                e[i + N][j] = z.im;
            }
        }
        e
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<[T; N]> {
        let (vals, _) = sym_eigen(&self.hermitian_part().real_embedding())?;
        // every eigenvalue of the embedding appears twice
        let mut out = [T::zero(); N];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (vals[2 * k] + vals[2 * k + 1]) * T::lit(0.5);
        }
        Ok(out)
    }

    /// Principal square root of a positive semidefinite Hermitian matrix.
    /// Negative eigenvalues from round-off are clipped to zero.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let (vals, vecs) = sym_eigen(&self.hermitian_part().real_embedding())?;
        let roots: Vec<T> = vals.iter().map(|&v| v.max(T::zero()).sqrt()).collect();
        let entry = |r: usize, c: usize| -> T { (0..2 * N).map(|k| vecs[r][k] * roots[k] * vecs[c][k]).sum() };
        Ok(Self::from_fn(|i, j| cx(entry(i, j), entry(i + N, j))))
    }
}

impl<T: Real, const N: usize> Default for Mat<T, N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<T, const N: usize> Index<(usize, usize)> for Mat<T, N> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.0[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for Mat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real, const N: usize> Add for Mat<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> AddAssign for Mat<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real, const N: usize> Sub for Mat<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> Neg for Mat<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Real, const N: usize> Mul for Mat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).fold(re(T::zero()), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

/// Pauli matrix `k` with `k = 0` the identity, then X, Y, Z.
/// Z is diagonal with `Z|H> = +|H>`.
pub fn pauli<T: Real>(k: usize) -> Mat2<T> {
    let (o, z) = (T::one(), T::zero());
    match k {
        0 => Mat2::identity(),
        1 => Mat([[re(z), re(o)], [re(o), re(z)]]),
        2 => Mat([[re(z), cx(z, -o)], [cx(z, o), re(z)]]),
        3 => Mat([[re(o), re(z)], [re(z), re(-o)]]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

pub fn sigma_x<T: Real>() -> Mat2<T> {
    pauli(1)
}

pub fn sigma_y<T: Real>() -> Mat2<T> {
    pauli(2)
}

pub fn sigma_z<T: Real>() -> Mat2<T> {
    pauli(3)
}

/// Kronecker product `a ⊗ b`; `a` acts on the first qubit.
pub fn tensor<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    Mat4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// Which qubit of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }
}

/// Traces out one qubit and returns the operator on `keep`.
pub fn partial_trace<T: Real>(rho: &Mat4<T>, keep: Subsystem) -> Mat2<T> {
    match keep {
        Subsystem::First => Mat2::from_fn(|i, j| rho.0[2 * i][2 * j] + rho.0[2 * i + 1][2 * j + 1]),
        Subsystem::Second => Mat2::from_fn(|k, l| rho.0[k][l] + rho.0[2 + k][2 + l]),
    }
}

/// Real three-vector, used for Bloch vectors and measurement directions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sqr(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// `v · σ`.
    pub fn dot_sigma(&self) -> Mat2<T> {
        Mat2::from_fn(|i, j| {
            let (x, y, z) = (self.x, self.y, self.z);
            match (i, j) {
                (0, 0) => re(z),
                (1, 1) => re(-z),
                (0, 1) => cx(x, -y),
                _ => cx(x, y),
            }
        })
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

impl<T: Real> Add for BlochVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for BlochVector<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for BlochVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Trace and Pauli components `Re Tr(m σ_k)` of an arbitrary operator.
pub fn pauli_components<T: Real>(m: &Mat2<T>) -> (T, BlochVector<T>) {
    let comp = |k: usize| (*m * pauli::<T>(k)).trace().re;
    (comp(0), BlochVector::new(comp(1), comp(2), comp(3)))
}

/// `(t I + u · σ) / 2`.
pub fn operator_from_components<T: Real>(t: T, u: &BlochVector<T>) -> Mat2<T> {
    (Mat2::identity().scale(t) + u.dot_sigma()).scale(T::lit(0.5))
}

/// Bloch vector of a unit-trace Hermitian qubit operator.
pub fn bloch_of<T: Real>(rho: &Mat2<T>) -> Result<BlochVector<T>> {
    let residual = rho.hermiticity_residual();
    if residual > T::lit(T::CHECK_TOL) {
        return Err(Error::NonHermitian { residual: residual.to_f64().unwrap_or(f64::NAN) });
    }
    let (tr, v) = pauli_components(rho);
    if (tr - T::one()).abs() > T::lit(T::CHECK_TOL) {
        return Err(Error::NotNormalized { trace: tr.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(v)
}

/// Density matrix `(I + v · σ) / 2` of a Bloch vector with `|v| <= 1`.
pub fn qubit_of<T: Real>(v: &BlochVector<T>) -> Result<Mat2<T>> {
    let n = v.norm();
    if !(n <= T::one() + T::lit(T::PSD_TOL)) {
        return Err(Error::InvalidBloch { norm: n.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(operator_from_components(T::one(), v))
}

/// Pauli decomposition of a two-qubit operator:
/// `rho = (I⊗I + a·σ⊗I + I⊗b·σ + Σ T_ij σ_i⊗σ_j) / 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliDecomposition<T> {
    pub trace: T,
    pub first: BlochVector<T>,
    pub second: BlochVector<T>,
    pub correlations: [[T; 3]; 3],
}

pub fn pauli_decomposition<T: Real>(rho: &Mat4<T>) -> PauliDecomposition<T> {
    let comp = |i: usize, j: usize| (*rho * tensor(&pauli::<T>(i), &pauli::<T>(j))).trace().re;
    let mut correlations = [[T::zero(); 3]; 3];
    for (i, row) in correlations.iter_mut().enumerate() {
        for (j, t) in row.iter_mut().enumerate() {
            *t = comp(i + 1, j + 1);
        }
    }
    PauliDecomposition {
        trace: comp(0, 0),
        first: BlochVector::new(comp(1, 0), comp(2, 0), comp(3, 0)),
        second: BlochVector::new(comp(0, 1), comp(0, 2), comp(0, 3)),
        correlations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn pauli_algebra() {
        let x = sigma_x::<f64>();
        let y = sigma_y::<f64>();
        let z = sigma_z::<f64>();
        let i2 = Mat2::<f64>::identity();
        for p in [x, y, z] {
            assert!((p * p).max_abs_diff(&i2) < 1e-15);
            assert!(p.hermiticity_residual() == 0.0);
            assert!(p.trace().norm() == 0.0);
        }
        // XY = iZ
        assert!((x * y).max_abs_diff(&z.scale_complex(cx(0.0, 1.0))) < 1e-15);
        // Z|H> = +|H>
        assert_eq!(z[(0, 0)].re, 1.0);
    }

    #[test]
    fn tensor_and_partial_trace() {
        let a = qubit_of(&BlochVector::new(0.1, -0.2, 0.3)).unwrap();
        let b = qubit_of(&BlochVector::new(-0.5, 0.4, 0.1)).unwrap();
        let ab = tensor(&a, &b);
        assert!(partial_trace(&ab, Subsystem::First).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, Subsystem::Second).max_abs_diff(&b) < 1e-15);
        // (σz ⊗ I) flips the sign of the VH, VV diagonal
        let zi = tensor(&sigma_z::<f64>(), &Mat2::identity());
        assert_eq!(zi[(2, 2)].re, -1.0);
        assert_eq!(zi[(1, 1)].re, 1.0);
    }

    #[test]
    fn bloch_round_trip_and_errors() {
        let v = BlochVector::new(0.3, 0.4, -0.5);
        let back = bloch_of(&qubit_of(&v).unwrap()).unwrap();
        assert!(back.max_abs_diff(&v) < 1e-15);
        assert!(matches!(qubit_of(&BlochVector::new(1.0, 1.0, 0.0)), Err(Error::InvalidBloch { .. })));
        let mut m = qubit_of(&v).unwrap();
        m[(0, 1)] = cx(0.3, 0.1);
        assert!(matches!(bloch_of(&m), Err(Error::NonHermitian { .. })));
        let half = Mat2::<f64>::identity().scale(0.4);
        assert!(matches!(bloch_of(&half), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn eigenvalues_and_sqrt() {
        let v = BlochVector::new(0.0, 0.6, 0.0);
        let rho = qubit_of(&v).unwrap();
        let ev = rho.eigenvalues_hermitian().unwrap();
        assert!(close(ev[0], 0.2) && close(ev[1], 0.8));
        let s = rho.sqrt_psd().unwrap();
        assert!((s * s).max_abs_diff(&rho) < 1e-13);
        assert!(s.hermiticity_residual() < 1e-14);
    }

    #[test]
    fn decomposition_recovers_product_state() {
        let a = BlochVector::new(0.1, 0.0, 0.5);
        let b = BlochVector::new(0.0, -0.3, 0.2);
        let rho = tensor(&qubit_of(&a).unwrap(), &qubit_of(&b).unwrap());
        let d = pauli_decomposition(&rho);
        assert!(close(d.trace, 1.0));
        assert!(d.first.max_abs_diff(&a) < 1e-15 && d.second.max_abs_diff(&b) < 1e-15);
        assert!(close(d.correlations[0][2], 0.1 * 0.2));
        assert!(close(d.correlations[2][1], 0.5 * -0.3));
    }

    #[test]
    fn single_precision_works() {
        let v = BlochVector::<f32>::new(0.2, 0.1, 0.3);
        let back = bloch_of(&qubit_of(&v).unwrap()).unwrap();
        assert!(back.max_abs_diff(&v) < 1e-6);
    }
}
