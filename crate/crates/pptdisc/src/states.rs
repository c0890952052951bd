//! Constructors for the states and measurement operators the analysis uses:
//! maximally entangled states and their orthogonal complements, symmetric /
//! anti-symmetric (Werner) states, the single-copy twirled measurements, the
//! padded embeddings into larger bipartite spaces, and the symmetric basis
//! operators that the twirl reduction expands POVM elements in.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, Factorization, Operator, DIM_CAP};

/// A normalized pure state with its tensor factorization and, for bipartite
/// states, the Schmidt coefficients (descending square roots of the reduced
/// density matrix spectrum).
#[derive(Clone, Debug)]
pub struct PureState {
    amplitudes: Vec<C64>,
    factorization: Factorization,
    schmidt_coeffs: Option<Vec<f64>>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, factorization: Factorization) -> Result<Self> {
        if amplitudes.len() != factorization.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector length {} does not match dimension {}",
                amplitudes.len(),
                factorization.total_dim()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} is not 1"
            )));
        }
        let schmidt_coeffs = if factorization.factor_count() == 2 {
            Some(schmidt_from_amplitudes(&amplitudes, &factorization)?)
        } else {
            None
        };
        Ok(Self {
            amplitudes,
            factorization,
            schmidt_coeffs,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// Schmidt coefficients, descending; `None` for non-bipartite states.
    pub fn schmidt_coeffs(&self) -> Option<&[f64]> {
        self.schmidt_coeffs.as_deref()
    }

    /// Largest squared Schmidt coefficient, in `[1/d, 1]` for a state on
    /// `C^d (x) C^d`.
    pub fn eta(&self) -> Option<f64> {
        self.schmidt_coeffs.as_ref().map(|c| c[0] * c[0])
    }

    /// Rank-1 projector onto the state.
    pub fn projector(&self) -> DensityMatrix {
        let op = Operator::outer(&self.amplitudes, self.factorization.clone())
            .expect("amplitude length checked at construction");
        DensityMatrix::from_valid(op)
    }
}

fn schmidt_from_amplitudes(amplitudes: &[C64], f: &Factorization) -> Result<Vec<f64>> {
    let [da, db] = [f.local_dims()[0], f.local_dims()[1]];
    // Reduced state on A: (M M^dagger) for the dA x dB amplitude matrix M.
    let mut red = Operator::zeros(Factorization::single(da));
    for i in 0..da {
        for ip in 0..da {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..db {
                acc += amplitudes[i * db + j] * amplitudes[ip * db + j].conj();
            }
            red.set(i, ip, acc);
        }
    }
    let mut lambdas = red.eigenvalues()?;
    for l in &mut lambdas {
        *l = l.max(0.0);
    }
    Ok(lambdas.into_iter().map(f64::sqrt).collect())
}

/// A named binary hypothesis pair: single-copy states plus the prior on the
/// null hypothesis.
#[derive(Clone, Debug)]
pub struct HypothesisPair {
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
    pub prior: f64,
    pub label: String,
}

impl HypothesisPair {
    pub fn new(
        rho0: DensityMatrix,
        rho1: DensityMatrix,
        prior: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        if rho0.op().factorization() != rho1.op().factorization() {
            return Err(Error::DimensionMismatch(
                "hypothesis states must share a factorization".into(),
            ));
        }
        check_prior(prior)?;
        Ok(Self {
            rho0,
            rho1,
            prior,
            label: label.into(),
        })
    }

    /// Maximally entangled state versus its orthogonal complement.
    pub fn mes(d: usize, prior: f64) -> Result<Self> {
        let phi = max_entangled(d)?;
        let perp = orth_complement(&phi)?;
        Self::new(phi, perp, prior, format!("mes d={d}"))
    }

    /// The reverse ordering of [`HypothesisPair::mes`].
    pub fn mes_reverse(d: usize, prior: f64) -> Result<Self> {
        let phi = max_entangled(d)?;
        let perp = orth_complement(&phi)?;
        Self::new(perp, phi, prior, format!("mes-reverse d={d}"))
    }

    /// Completely symmetric versus completely anti-symmetric state.
    pub fn werner(d: usize, prior: f64) -> Result<Self> {
        let (sym, asym) = werner_states(d)?;
        Self::new(sym, asym, prior, format!("werner d={d}"))
    }

    pub fn werner_reverse(d: usize, prior: f64) -> Result<Self> {
        let (sym, asym) = werner_states(d)?;
        Self::new(asym, sym, prior, format!("werner-reverse d={d}"))
    }

    /// Embedded `Phi_m` versus the padded mixture of its complement.
    pub fn mes_padded(m: usize, d: usize, lambda: f64, prior: f64) -> Result<Self> {
        let phi = max_entangled(m)?;
        let perp = orth_complement(&phi)?;
        Self::new(
            embed_padded(&phi, m, d)?,
            padded_mixture(&perp, lambda, m, d)?,
            prior,
            format!("mes-padded m={m} d={d} lambda={lambda}"),
        )
    }

    /// Embedded `Phi_m^perp` versus the padded mixture of `Phi_m`.
    pub fn mes_perp_padded(m: usize, d: usize, lambda: f64, prior: f64) -> Result<Self> {
        let phi = max_entangled(m)?;
        let perp = orth_complement(&phi)?;
        Self::new(
            embed_padded(&perp, m, d)?,
            padded_mixture(&phi, lambda, m, d)?,
            prior,
            format!("mes-perp-padded m={m} d={d} lambda={lambda}"),
        )
    }

    /// Embedded symmetric state versus the padded anti-symmetric mixture.
    pub fn werner_padded(m: usize, d: usize, lambda: f64, prior: f64) -> Result<Self> {
        let (sym, asym) = werner_states(m)?;
        Self::new(
            embed_padded(&sym, m, d)?,
            padded_mixture(&asym, lambda, m, d)?,
            prior,
            format!("werner-padded m={m} d={d} lambda={lambda}"),
        )
    }

    pub fn werner_perp_padded(m: usize, d: usize, lambda: f64, prior: f64) -> Result<Self> {
        let (sym, asym) = werner_states(m)?;
        Self::new(
            embed_padded(&asym, m, d)?,
            padded_mixture(&sym, lambda, m, d)?,
            prior,
            format!("werner-perp-padded m={m} d={d} lambda={lambda}"),
        )
    }
}

fn check_prior(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("prior {p} outside (0, 1)")));
    }
    Ok(())
}

/// The maximally entangled state `Phi_d` on `C^d (x) C^d`.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "maximally entangled state needs d >= 2, got {d}"
        )));
    }
    let f = Factorization::bipartite(d, d)?;
    let mut op = Operator::zeros(f);
    let w = 1.0 / d as f64;
    for i in 0..d {
        for j in 0..d {
            op.set(i * d + i, j * d + j, C64::new(w, 0.0));
        }
    }
    DensityMatrix::new(op)
}

/// `(1 - rho) / (D - 1)` for a pure state `rho`; orthogonal to the input.
pub fn orth_complement(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let purity = rho.op().trace_product(rho.op())?.re;
    if (purity - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "orthogonal complement needs a pure input; Tr[rho^2] = {purity}"
        )));
    }
    let dim = rho.dim();
    if dim < 2 {
        return Err(Error::InvalidArgument(
            "complement undefined in dimension 1".into(),
        ));
    }
    let id = Operator::identity(rho.op().factorization().clone());
    let op = id.sub(rho.op())?.scale(1.0 / (dim as f64 - 1.0));
    Ok(DensityMatrix::from_valid(op))
}

/// Pure state with the given Schmidt spectrum: `sum_i sqrt(coeffs[i]) |ii>`
/// on `C^d (x) C^d` with `d = coeffs.len()`.
pub fn schmidt_state(coeffs: &[f64]) -> Result<PureState> {
    if coeffs.iter().any(|&c| c < 0.0) {
        return Err(Error::InvalidArgument(
            "Schmidt coefficients must be nonnegative".into(),
        ));
    }
    let sum: f64 = coeffs.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Schmidt coefficients sum to {sum}, not 1"
        )));
    }
    let d = coeffs.len();
    let f = Factorization::bipartite(d, d)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); d * d];
    for (i, &c) in coeffs.iter().enumerate() {
        amplitudes[i * d + i] = C64::new(c.sqrt(), 0.0);
    }
    PureState::new(amplitudes, f)
}

/// The flip (swap) operator `F |ij> = |ji>` on `C^d (x) C^d`.
pub fn flip_operator(d: usize) -> Result<Operator> {
    let f = Factorization::bipartite(d, d)?;
    let mut op = Operator::zeros(f);
    for i in 0..d {
        for j in 0..d {
            op.set(i * d + j, j * d + i, C64::new(1.0, 0.0));
        }
    }
    Ok(op)
}

/// Projectors onto the symmetric and anti-symmetric subspaces:
/// `Pi_s = (1 + F)/2`, `Pi_a = (1 - F)/2`.
pub fn sym_antisym_projectors(d: usize) -> Result<(Operator, Operator)> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    let flip = flip_operator(d)?;
    let id = Operator::identity(flip.factorization().clone());
    let sym = id.add(&flip)?.scale(0.5);
    let asym = id.sub(&flip)?.scale(0.5);
    Ok((sym, asym))
}

/// The completely symmetric and completely anti-symmetric (Werner) states,
/// normalized as `2 Pi_s / (d(d+1))` and `2 Pi_a / (d(d-1))`.
pub fn werner_states(d: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let (sym, asym) = sym_antisym_projectors(d)?;
    let df = d as f64;
    let sym_state = DensityMatrix::new(sym.scale(2.0 / (df * (df + 1.0))))?;
    let asym_state = DensityMatrix::new(asym.scale(2.0 / (df * (df - 1.0))))?;
    Ok((sym_state, asym_state))
}

/// The twirled single-copy measurement `M_d = Phi_d + (1 - Phi_d)/(d + 1)`.
pub fn measurement_m(d: usize) -> Result<Operator> {
    let phi = max_entangled(d)?;
    let id = Operator::identity(phi.op().factorization().clone());
    let rest = id.sub(phi.op())?.scale(1.0 / (d as f64 + 1.0));
    phi.op().add(&rest)
}

/// The symmetric-subspace measurement `((m-1)/(m+1)) Pi_s + Pi_a`.
pub fn measurement_m_bar(m: usize) -> Result<Operator> {
    let (sym, asym) = sym_antisym_projectors(m)?;
    let mf = m as f64;
    sym.scale((mf - 1.0) / (mf + 1.0)).add(&asym)
}

/// Embeds a state on `C^m (x) C^m` into `C^d (x) C^d` via the local isometry
/// that keeps the first `m` basis vectors on each side, preserving the
/// bipartition (so partial transposes stay well defined).
pub fn embed_padded(rho_small: &DensityMatrix, m: usize, d: usize) -> Result<DensityMatrix> {
    if m > d {
        return Err(Error::InvalidArgument(format!(
            "cannot embed m={m} into smaller d={d}"
        )));
    }
    let dims = rho_small.op().factorization().local_dims();
    if dims != [m, m] {
        return Err(Error::DimensionMismatch(format!(
            "embedding expects a state on [{m}, {m}], got {dims:?}"
        )));
    }
    let f = Factorization::bipartite(d, d)?;
    let mut op = Operator::zeros(f);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    op.set(
                        i * d + j,
                        k * d + l,
                        rho_small.op().get(i * m + j, k * m + l),
                    );
                }
            }
        }
    }
    Ok(DensityMatrix::from_valid(op))
}

/// `lambda * embed(rho_small) + (1 - lambda) * tau` where `tau` is the
/// uniform state on the orthogonal complement of the embedded `m^2`-dim
/// product subspace inside `C^d (x) C^d`.
pub fn padded_mixture(
    rho_small: &DensityMatrix,
    lambda: f64,
    m: usize,
    d: usize,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    if m >= d {
        return Err(Error::InvalidArgument(format!(
            "padding needs m < d, got m={m}, d={d}"
        )));
    }
    let embedded = embed_padded(rho_small, m, d)?;
    let f = embedded.op().factorization().clone();
    let mut complement = Operator::identity(f);
    for i in 0..m {
        for j in 0..m {
            complement.set(i * d + j, i * d + j, C64::new(0.0, 0.0));
        }
    }
    let pad_dim = (d * d - m * m) as f64;
    let op = embedded
        .op()
        .scale(lambda)
        .add(&complement.scale((1.0 - lambda) / pad_dim))?;
    Ok(DensityMatrix::from_valid(op))
}

/// Sum of all n-fold tensor words over `{Phi_d, 1 - Phi_d}` with exactly `k`
/// copies of `Phi_d`. The family resolves the identity: `sum_k B_k = 1`.
pub fn bk_operator(n: u32, k: u32, d: usize) -> Result<Operator> {
    if k > n || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= k <= n with n >= 1, got k={k}, n={n}"
        )));
    }
    let per_copy = d * d;
    match per_copy.checked_pow(n) {
        Some(total) if total <= DIM_CAP => {}
        _ => {
            return Err(Error::DimensionCap {
                dim: per_copy.pow(n.min(8)),
                cap: DIM_CAP,
            })
        }
    }
    let phi = max_entangled(d)?;
    let id = Operator::identity(phi.op().factorization().clone());
    let rest = id.sub(phi.op())?;
    let mut acc: Option<Operator> = None;
    for word in 0u32..(1 << n) {
        if word.count_ones() != k {
            continue;
        }
        let mut term: Option<Operator> = None;
        for bit in 0..n {
            let factor = if word >> bit & 1 == 1 {
                phi.op()
            } else {
                &rest
            };
            term = Some(match term {
                None => factor.clone(),
                Some(t) => t.kron(factor)?,
            });
        }
        let term = term.expect("n >= 1");
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("at least one word per k <= n"))
}

/// Seeded random-state utilities (Haar-like sampling via complex Gaussians).
pub mod random {
    use super::*;
    use rand::Rng;

    /// Standard normal via Box-Muller.
    pub fn standard_normal(rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    fn gaussian_complex(rng: &mut impl Rng) -> C64 {
        C64::new(standard_normal(rng), standard_normal(rng))
    }

    /// Haar-random pure state on the given factorization.
    pub fn pure_state(rng: &mut impl Rng, factorization: Factorization) -> PureState {
        let n = factorization.total_dim();
        loop {
            let mut amps: Vec<C64> = (0..n).map(|_| gaussian_complex(rng)).collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            for a in &mut amps {
                *a /= norm;
            }
            return PureState::new(amps, factorization.clone())
                .expect("normalized by construction");
        }
    }

    /// Haar-random entangled pure state on `C^d (x) C^d`; resamples until the
    /// largest squared Schmidt coefficient stays away from 1.
    pub fn entangled_pure_state(rng: &mut impl Rng, d: usize) -> PureState {
        let f = Factorization::bipartite(d, d).expect("within cap");
        loop {
            let psi = pure_state(rng, f.clone());
            if psi.eta().expect("bipartite") < 0.95 {
                return psi;
            }
        }
    }

    /// Random full-rank density matrix `G G^dagger / Tr`.
    pub fn density_matrix(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
        let f = Factorization::single(dim);
        let g = Operator::from_fn(f, |_, _| gaussian_complex(rng));
        let psd = g.matmul(&g.adjoint()).expect("same dims");
        let tr = psd.trace().re;
        DensityMatrix::from_valid(psd.scale(1.0 / tr))
    }

    /// Random Hermitian operator with entries of order 1.
    pub fn hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
        let f = Factorization::single(dim);
        let g = Operator::from_fn(f, |_, _| gaussian_complex(rng));
        g.add(&g.adjoint()).expect("same dims").scale(0.5)
    }
}
