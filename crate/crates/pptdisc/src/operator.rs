//! Dense complex operators on tensor-factored Hilbert spaces.
//!
//! An [`Operator`] is a square matrix of `Complex64` entries tagged with a
//! [`Factorization`] describing how its Hilbert space splits into local tensor
//! factors. The factorization is what gives meaning to the partial transpose
//! and partial trace; all other algebra ignores it apart from shape checks.
//!
//! Values are immutable after construction and all operations are pure, so
//! everything here is safe to share across threads.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hard cap on the total dimension of any constructed operator.
///
/// Covers d = 2..5 single copies and tensor powers up to the sizes the
/// linear-program and certificate checks need; dense storage beyond this is
/// wasteful and almost certainly a caller bug.
pub const DIM_CAP: usize = 4096;

/// Default tolerance for Hermiticity / positivity / normalization checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Ordered list of local dimensions of a tensor-factored Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    dims: Vec<usize>,
}

impl Factorization {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "factorization needs at least one factor, all of dimension >= 1".into(),
            ));
        }
        let total: usize = dims.iter().product();
        if total > DIM_CAP {
            return Err(Error::DimensionCap {
                dim: total,
                cap: DIM_CAP,
            });
        }
        Ok(Self { dims })
    }

    /// Single unfactored space of dimension `dim`.
    pub fn single(dim: usize) -> Self {
        Self::new(vec![dim]).expect("single factor within cap")
    }

    /// Bipartite space `C^da (x) C^db`.
    pub fn bipartite(da: usize, db: usize) -> Result<Self> {
        Self::new(vec![da, db])
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Concatenation, as produced by a tensor product.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// Stride of factor `k` in row-major index order (product of later dims).
    fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }
}

/// Dense square complex matrix with a tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: Vec<C64>,
    factorization: Factorization,
}

impl Operator {
    pub fn zeros(factorization: Factorization) -> Self {
        let n = factorization.total_dim();
        Self {
            data: vec![C64::new(0.0, 0.0); n * n],
            factorization,
        }
    }

    pub fn identity(factorization: Factorization) -> Self {
        let n = factorization.total_dim();
        let mut op = Self::zeros(factorization);
        for i in 0..n {
            op.data[i * n + i] = C64::new(1.0, 0.0);
        }
        op
    }

    pub fn from_fn(factorization: Factorization, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = factorization.total_dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self {
            data,
            factorization,
        }
    }

    /// Builds from a row-major entry slice.
    pub fn from_rows(factorization: Factorization, entries: &[C64]) -> Result<Self> {
        let n = factorization.total_dim();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dimension {}, got {}",
                n * n,
                n,
                entries.len()
            )));
        }
        Ok(Self {
            data: entries.to_vec(),
            factorization,
        })
    }

    /// Real diagonal matrix on a single factor.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut op = Self::zeros(Factorization::single(n));
        for (i, &v) in entries.iter().enumerate() {
            op.data[i * n + i] = C64::new(v, 0.0);
        }
        op
    }

    /// Projector `|v><v|` on the given factorization.
    pub fn outer(v: &[C64], factorization: Factorization) -> Result<Self> {
        let n = factorization.total_dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                n
            )));
        }
        Ok(Self::from_fn(factorization, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.factorization.total_dim()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// Re-tags the factorization; the total dimension must be unchanged.
    pub fn with_factorization(mut self, factorization: Factorization) -> Result<Self> {
        if factorization.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot retag dimension {} as total dimension {}",
                self.dim(),
                factorization.total_dim()
            )));
        }
        self.factorization = factorization;
        Ok(self)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let n = self.dim();
        self.data[i * n + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        let n = self.dim();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        Self::from_fn(self.factorization.clone(), |i, j| {
            self.data[j * n + i].conj()
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Self::from_fn(self.factorization.clone(), |i, j| self.data[j * n + i])
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.conj();
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let mut out = Self::zeros(self.factorization.clone());
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `Tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        Ok(acc)
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                n
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += self.data[i * n + j] * v[j];
            }
            acc += v[i].conj() * row;
        }
        Ok(acc)
    }

    /// Matrix-vector product `self |v>`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                n
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `max |H - H^dagger|` entrywise.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator dimensions {} and {} differ",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    fn check_factor(&self, factor: usize) -> Result<()> {
        let count = self.factorization.factor_count();
        if factor >= count {
            return Err(Error::InvalidFactor {
                index: factor,
                count,
            });
        }
        Ok(())
    }

    /// Tensor (Kronecker) product; the factorizations concatenate.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let f = self.factorization.concat(&other.factorization)?;
        let (na, nb) = (self.dim(), other.dim());
        let n = na * nb;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for ia in 0..na {
            for ja in 0..na {
                let a = self.data[ia * na + ja];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..nb {
                    let src = &other.data[ib * nb..(ib + 1) * nb];
                    let off = (ia * nb + ib) * n + ja * nb;
                    for (jb, b) in src.iter().enumerate() {
                        data[off + jb] = a * b;
                    }
                }
            }
        }
        Ok(Self {
            data,
            factorization: f,
        })
    }

    /// `self^{(x) n}`; `n = 0` yields the scalar 1 on a 1-dimensional space.
    pub fn kron_power(&self, n: u32) -> Result<Self> {
        let mut out = Self::identity(Factorization::single(1));
        for _ in 0..n {
            out = out.kron(self)?;
        }
        if n > 0 {
            // Drop the leading trivial factor introduced by the seed.
            let dims = out.factorization.local_dims()[1..].to_vec();
            out = out.with_factorization(Factorization::new(dims)?)?;
        }
        Ok(out)
    }

    /// Block-diagonal direct sum; the result is a single unfactored space.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (na, nb) = (self.dim(), other.dim());
        let f = Factorization::new(vec![na + nb])?;
        let n = na + nb;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..na {
            for j in 0..na {
                data[i * n + j] = self.data[i * na + j];
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                data[(na + i) * n + (na + j)] = other.data[i * nb + j];
            }
        }
        Ok(Self {
            data,
            factorization: f,
        })
    }

    /// Transposes the indicated tensor factor only.
    pub fn partial_transpose(&self, factor: usize) -> Result<Self> {
        self.check_factor(factor)?;
        let n = self.dim();
        let dk = self.factorization.local_dims()[factor];
        let stride = self.factorization.stride(factor);
        let mut out = Self::zeros(self.factorization.clone());
        for i in 0..n {
            let ik = (i / stride) % dk;
            for j in 0..n {
                let jk = (j / stride) % dk;
                let ni = (i as isize + (jk as isize - ik as isize) * stride as isize) as usize;
                let nj = (j as isize + (ik as isize - jk as isize) * stride as isize) as usize;
                out.data[ni * n + nj] = self.data[i * n + j];
            }
        }
        Ok(out)
    }

    /// Partial transpose of every odd-indexed factor.
    ///
    /// States on n copies of a bipartite space carry the factorization
    /// `[dA, dB, dA, dB, ...]`, so this is the transpose on the whole B side,
    /// the map the PPT measurement condition refers to.
    pub fn gamma(&self) -> Result<Self> {
        let count = self.factorization.factor_count();
        if count < 2 || !count.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "gamma needs an even number of tensor factors, got {count}"
            )));
        }
        let mut out = self.clone();
        for k in (1..count).step_by(2) {
            out = out.partial_transpose(k)?;
        }
        Ok(out)
    }

    /// Traces out the indicated tensor factor.
    pub fn partial_trace(&self, factor: usize) -> Result<Self> {
        self.check_factor(factor)?;
        let count = self.factorization.factor_count();
        let dk = self.factorization.local_dims()[factor];
        let right = self.factorization.stride(factor);
        let n = self.dim();
        let reduced_dims: Vec<usize> = self
            .factorization
            .local_dims()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != factor)
            .map(|(_, &d)| d)
            .collect();
        let f = if count == 1 {
            Factorization::single(1)
        } else {
            Factorization::new(reduced_dims)?
        };
        let m = f.total_dim();
        let full = |r: usize, a: usize| (r / right) * dk * right + a * right + (r % right);
        let mut out = Self::zeros(f);
        for ri in 0..m {
            for rj in 0..m {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..dk {
                    acc += self.data[full(ri, a) * n + full(rj, a)];
                }
                out.data[ri * m + rj] = acc;
            }
        }
        Ok(out)
    }

    /// Reorders tensor factors: new factor `p` is old factor `perm[p]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Self> {
        let count = self.factorization.factor_count();
        let mut seen = vec![false; count];
        if perm.len() != count
            || perm
                .iter()
                .any(|&p| p >= count || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "permutation {perm:?} is not a permutation of 0..{count}"
            )));
        }
        let old_dims = self.factorization.local_dims().to_vec();
        let new_dims: Vec<usize> = perm.iter().map(|&p| old_dims[p]).collect();
        let f = Factorization::new(new_dims)?;
        let n = self.dim();
        // Map each old flat index to its new flat index.
        let old_strides: Vec<usize> = (0..count).map(|k| self.factorization.stride(k)).collect();
        let new_strides: Vec<usize> = (0..count).map(|k| f.stride(k)).collect();
        let mut index_map = vec![0usize; n];
        for i in 0..n {
            let mut ni = 0usize;
            for p in 0..count {
                let comp = (i / old_strides[perm[p]]) % old_dims[perm[p]];
                ni += comp * new_strides[p];
            }
            index_map[i] = ni;
        }
        let mut out = Self::zeros(f);
        for i in 0..n {
            for j in 0..n {
                out.data[index_map[i] * n + index_map[j]] = self.data[i * n + j];
            }
        }
        Ok(out)
    }

    /// Eigendecomposition of a Hermitian operator, eigenvalues descending.
    pub fn eig_hermitian(&self) -> Result<Spectrum> {
        self.require_hermitian()?;
        let (vals, vecs) = crate::eigen::eig_hermitian(&self.data, self.dim(), true)?;
        Ok(Spectrum {
            eigenvalues: vals,
            eigenvectors: Operator {
                data: vecs.expect("vectors requested"),
                factorization: self.factorization.clone(),
            },
        })
    }

    /// Eigenvalues only (descending), skipping eigenvector accumulation.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let (vals, _) = crate::eigen::eig_hermitian(&self.data, self.dim(), false)?;
        Ok(vals)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Sum of absolute eigenvalues (Schatten 1-norm of a Hermitian operator).
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|v| v.abs()).sum())
    }

    /// True iff the minimum eigenvalue is `>= -tol`. Hermitian input only.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        let scale = self.max_abs().max(1.0);
        if deviation > 1e-9 * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Real eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub eigenvectors: Operator,
}

impl Spectrum {
    /// Rebuilds `V f(L) V^dagger`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Operator {
        let n = self.eigenvectors.dim();
        let mut out = Operator::zeros(self.eigenvectors.factorization().clone());
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let flam = f(lambda);
            if flam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.eigenvectors.get(i, k);
                if vi.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let add = vi * self.eigenvectors.get(j, k).conj() * flam;
                    let cur = out.get(i, j);
                    out.set(i, j, cur + add);
                }
            }
        }
        out
    }

    /// Column `k` as an owned vector.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

/// A positive semi-definite unit-trace operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity, and unit trace at `DEFAULT_TOL`.
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tol(op, DEFAULT_TOL)
    }

    pub fn with_tol(op: Operator, tol: f64) -> Result<Self> {
        if !op.is_hermitian(tol) {
            return Err(Error::InvalidState(format!(
                "not Hermitian within {tol:.1e} (deviation {:.3e})",
                op.hermitian_deviation()
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace {tr} is not 1 within {tol:.1e}"
            )));
        }
        let min = op.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:.3e} below -{tol:.1e}"
            )));
        }
        Ok(Self { op })
    }

    /// Wraps an operator that is positive and normalized by construction.
    ///
    /// Used for composites of validated states (tensor powers, convex
    /// mixtures, isometric embeddings) where re-validating would force an
    /// eigensolve on every call. Hermiticity and trace are still asserted.
    pub(crate) fn from_valid(op: Operator) -> Self {
        debug_assert!(op.is_hermitian(1e-9 * op.max_abs().max(1.0)));
        debug_assert!((op.trace().re - 1.0).abs() < 1e-8);
        Self { op }
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_op(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// n-fold tensor power, still a valid state.
    pub fn kron_power(&self, n: u32) -> Result<Self> {
        Ok(Self::from_valid(self.op.kron_power(n)?))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_valid(self.op.kron(&other.op)?))
    }

    /// Fractional power `rho^s` for `0 <= s <= 1`, computed on the support.
    ///
    /// Eigenvalues at or below `1e-12 * lambda_max` are treated as exact
    /// zeros for every `s`, so `s = 0` yields the support projector and
    /// orthogonal states produce exactly orthogonal powers.
    pub fn frac_power(&self, s: f64) -> Result<Operator> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "fractional power s={s} outside [0, 1]"
            )));
        }
        let spectrum = self.op.eig_hermitian()?;
        let support_tol = 1e-12 * spectrum.eigenvalues[0].abs().max(f64::MIN_POSITIVE);
        Ok(spectrum.apply(|lambda| {
            if lambda <= support_tol {
                0.0
            } else {
                lambda.powf(s)
            }
        }))
    }
}
