//! Unextendible product bases and the SEP-versus-PPT separation they
//! witness.
//!
//! The central quantity is the minimax overlap of a product basis: the
//! minimum over product density pairs of the largest member overlap. It is
//! strictly positive exactly when the basis is unextendible, it multiplies
//! under tensor products, and `mu = delta / N` drives the exponential lower
//! bound on the separable-measurement error probability while the basis
//! projector stays perfectly distinguishable by PPT tests.
//!
//! The minimax value is estimated by projected subgradient descent over both
//! factors (an upper bound on the true minimum; the landscape is nonconvex),
//! cross-checked by a coarse grid oracle on small dimensions. Block
//! positivity is only ever falsified here, never certified: certificate-grade
//! claims route through plain positivity or the multiplicativity argument.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, Factorization, Operator};
use crate::states::HypothesisPair;

/// A list of product unit vectors on a bipartite space, pairwise orthogonal
/// as product vectors.
#[derive(Clone, Debug)]
pub struct ProductBasis {
    a_vectors: Vec<Vec<C64>>,
    b_vectors: Vec<Vec<C64>>,
    dims: (usize, usize),
}

impl ProductBasis {
    pub fn new(a_vectors: Vec<Vec<C64>>, b_vectors: Vec<Vec<C64>>) -> Result<Self> {
        if a_vectors.len() != b_vectors.len() || a_vectors.is_empty() {
            return Err(Error::InvalidArgument(
                "need matching, nonempty A and B vector lists".into(),
            ));
        }
        let da = a_vectors[0].len();
        let db = b_vectors[0].len();
        for (a, b) in a_vectors.iter().zip(&b_vectors) {
            if a.len() != da || b.len() != db {
                return Err(Error::DimensionMismatch("ragged vector lists".into()));
            }
            for (v, side) in [(a, "A"), (b, "B")] {
                let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidState(format!(
                        "{side} vector has squared norm {norm}"
                    )));
                }
            }
        }
        let basis = Self {
            a_vectors,
            b_vectors,
            dims: (da, db),
        };
        // Pairwise orthogonality of the product vectors.
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let ova = inner(&basis.a_vectors[i], &basis.a_vectors[j]);
                let ovb = inner(&basis.b_vectors[i], &basis.b_vectors[j]);
                let overlap = (ova * ovb).norm();
                if overlap > 1e-10 {
                    return Err(Error::InvalidState(format!(
                        "product vectors {i} and {j} overlap by {overlap:.3e}"
                    )));
                }
            }
        }
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.a_vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_vectors.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn a_vectors(&self) -> &[Vec<C64>] {
        &self.a_vectors
    }

    pub fn b_vectors(&self) -> &[Vec<C64>] {
        &self.b_vectors
    }

    /// The (unnormalized) projector `P = sum_i |a_i b_i><a_i b_i|` on the
    /// bipartite factorization.
    pub fn projector(&self) -> Result<Operator> {
        let f = Factorization::bipartite(self.dims.0, self.dims.1)?;
        let mut p = Operator::zeros(f.clone());
        for (a, b) in self.a_vectors.iter().zip(&self.b_vectors) {
            let mut prod = Vec::with_capacity(self.dims.0 * self.dims.1);
            for ca in a {
                for cb in b {
                    prod.push(ca * cb);
                }
            }
            p = p.add(&Operator::outer(&prod, f.clone())?)?;
        }
        Ok(p)
    }

    /// Tensor product of two bases: A factors combine with A factors and B
    /// with B, giving a product basis on the grouped bipartite space.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut a_vectors = Vec::with_capacity(self.len() * other.len());
        let mut b_vectors = Vec::with_capacity(self.len() * other.len());
        for i in 0..self.len() {
            for j in 0..other.len() {
                a_vectors.push(kron_vec(&self.a_vectors[i], &other.a_vectors[j]));
                b_vectors.push(kron_vec(&self.b_vectors[i], &other.b_vectors[j]));
            }
        }
        Self::new(a_vectors, b_vectors)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |vs: &[Vec<C64>]| -> Vec<Vec<[f64; 2]>> {
            vs.iter()
                .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
                .collect()
        };
        serde_json::json!(BasisFile {
            dims: [self.dims.0, self.dims.1],
            a_vectors: enc(&self.a_vectors),
            b_vectors: enc(&self.b_vectors),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: BasisFile = serde_json::from_value(value.clone())?;
        let dec = |vs: Vec<Vec<[f64; 2]>>| -> Vec<Vec<C64>> {
            vs.into_iter()
                .map(|v| v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                .collect()
        };
        let basis = Self::new(dec(file.a_vectors), dec(file.b_vectors))?;
        if [basis.dims.0, basis.dims.1] != file.dims {
            return Err(Error::DimensionMismatch(
                "declared dims do not match vectors".into(),
            ));
        }
        Ok(basis)
    }
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    dims: [usize; 2],
    a_vectors: Vec<Vec<[f64; 2]>>,
    b_vectors: Vec<Vec<[f64; 2]>>,
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ca in a {
        for cb in b {
            out.push(ca * cb);
        }
    }
    out
}

/// The five-member Tiles basis on `C^3 (x) C^3`, the smallest standard
/// bipartite unextendible product basis.
pub fn tiles_upb() -> ProductBasis {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / 3f64.sqrt();
    let re = |v: [f64; 3]| -> Vec<C64> { v.iter().map(|&x| C64::new(x, 0.0)).collect() };
    let e0 = re([1.0, 0.0, 0.0]);
    let e2 = re([0.0, 0.0, 1.0]);
    let m01 = re([s2, -s2, 0.0]);
    let m12 = re([0.0, s2, -s2]);
    let uniform = re([s3, s3, s3]);
    ProductBasis::new(
        vec![
            e0.clone(),
            e2.clone(),
            m01.clone(),
            m12.clone(),
            uniform.clone(),
        ],
        vec![m01, m12, e2, e0, uniform],
    )
    .expect("tiles basis is orthogonal by construction")
}

/// Optimizer settings for the minimax overlap estimate.
#[derive(Clone, Debug)]
pub struct DeltaConfig {
    pub restarts: usize,
    /// Iterations of the diminishing-step (1/sqrt(k)) exploration stage.
    pub explore_iters: usize,
    /// Iterations per annealing scale in the polish stage.
    pub polish_iters: usize,
    /// Convergence: objective improvement below this over a full polish
    /// cycle counts as converged.
    pub improve_tol: f64,
    pub seed: u64,
}

impl Default for DeltaConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            explore_iters: 2000,
            polish_iters: 500,
            improve_tol: 1e-8,
            seed: 0,
        }
    }
}

/// Step scales of the polish stage; constant-step subgradient oscillates at
/// a radius proportional to the step, so cycling the scale down sharpens the
/// incumbent geometrically.
const POLISH_SCALES: [f64; 8] = [3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5];

/// Result of the minimax-overlap optimization. The value is an upper bound
/// on the true minimum (the optimization is nonconvex).
#[derive(Clone, Debug)]
pub struct DeltaEstimate {
    pub value: f64,
    pub rho_a: DensityMatrix,
    pub rho_b: DensityMatrix,
    pub restarts_used: usize,
    pub converged: bool,
}

struct OverlapProblem {
    a_vectors: Vec<Vec<C64>>,
    b_vectors: Vec<Vec<C64>>,
}

impl OverlapProblem {
    fn overlaps(vectors: &[Vec<C64>], rho: &Operator) -> Vec<f64> {
        vectors
            .iter()
            .map(|v| rho.expectation(v).expect("dimension checked").re.max(0.0))
            .collect()
    }

    fn objective(&self, rho_a: &Operator, rho_b: &Operator) -> (f64, usize, Vec<f64>, Vec<f64>) {
        let a = Self::overlaps(&self.a_vectors, rho_a);
        let b = Self::overlaps(&self.b_vectors, rho_b);
        let (mut best_val, mut best_idx) = (f64::NEG_INFINITY, 0);
        for i in 0..a.len() {
            let v = a[i] * b[i];
            if v > best_val {
                best_val = v;
                best_idx = i;
            }
        }
        (best_val, best_idx, a, b)
    }
}

/// Projects a Hermitian matrix onto the density-matrix set: eigenvalues onto
/// the probability simplex, eigenvectors kept.
fn project_density(op: &Operator) -> Result<Operator> {
    let spec = op.eig_hermitian()?;
    let weights = project_simplex(&spec.eigenvalues);
    let n = op.dim();
    let mut out = Operator::zeros(op.factorization().clone());
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = spec.eigenvector(k);
        for i in 0..n {
            if v[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                let add = v[i] * v[j].conj() * w;
                let cur = out.get(i, j);
                out.set(i, j, cur + add);
            }
        }
    }
    Ok(out)
}

/// Euclidean projection of a real vector onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    v.iter().map(|&x| (x - threshold).max(0.0)).collect()
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    crate::states::random::density_matrix(rng, dim).into_op()
}

/// Estimates the minimax overlap by seeded multi-restart projected
/// subgradient descent, alternating single subgradient steps between the two
/// factors, with a diminishing-step exploration stage followed by a
/// step-annealing polish around the incumbent.
pub fn delta_s(basis: &ProductBasis, config: &DeltaConfig) -> Result<DeltaEstimate> {
    delta_s_with_inits(basis, config, &[])
}

/// Same as [`delta_s`] but with extra caller-supplied starting pairs tried
/// before the random restarts (used to seed tensor-product instances with
/// the product of single-factor optima).
pub fn delta_s_with_inits(
    basis: &ProductBasis,
    config: &DeltaConfig,
    extra_inits: &[(Operator, Operator)],
) -> Result<DeltaEstimate> {
    let problem = OverlapProblem {
        a_vectors: basis.a_vectors.clone(),
        b_vectors: basis.b_vectors.clone(),
    };
    let (da, db) = basis.dims();
    let mut best: Option<(f64, Operator, Operator)> = None;
    let mut converged = false;
    let mut restarts_used = 0;

    let run_from = |rho_a: Operator,
                    rho_b: Operator,
                    converged: &mut bool|
     -> Result<(f64, Operator, Operator)> {
        let mut rho_a = rho_a;
        let mut rho_b = rho_b;
        let (mut best_val, _, _, _) = problem.objective(&rho_a, &rho_b);
        let mut best_pair = (rho_a.clone(), rho_b.clone());
        let step = |rho_a: &mut Operator, rho_b: &mut Operator, size: f64| -> Result<f64> {
            // Factor A update from the active member, then factor B with the
            // refreshed overlaps.
            let (_, idx, _, b) = problem.objective(rho_a, rho_b);
            let grad_a = Operator::outer(&problem.a_vectors[idx], rho_a.factorization().clone())?
                .scale(b[idx]);
            *rho_a = project_density(&rho_a.sub(&grad_a.scale(size))?)?;
            let (val, idx, a, _) = problem.objective(rho_a, rho_b);
            let grad_b = Operator::outer(&problem.b_vectors[idx], rho_b.factorization().clone())?
                .scale(a[idx]);
            *rho_b = project_density(&rho_b.sub(&grad_b.scale(size))?)?;
            let (after, _, _, _) = problem.objective(rho_a, rho_b);
            Ok(val.min(after))
        };
        for k in 1..=config.explore_iters {
            let val = step(&mut rho_a, &mut rho_b, 0.3 / (k as f64).sqrt())?;
            if val < best_val {
                best_val = val;
                best_pair = (rho_a.clone(), rho_b.clone());
            }
        }
        // Converged when the incumbent stops improving by `improve_tol` for
        // 50 consecutive polish iterations (and stays stalled to the end).
        let mut marked_val = best_val;
        let mut stall = 0usize;
        for scale in POLISH_SCALES {
            rho_a = best_pair.0.clone();
            rho_b = best_pair.1.clone();
            for _ in 0..config.polish_iters {
                let val = step(&mut rho_a, &mut rho_b, scale)?;
                if val < best_val {
                    best_val = val;
                    best_pair = (rho_a.clone(), rho_b.clone());
                }
                if marked_val - best_val >= config.improve_tol {
                    marked_val = best_val;
                    stall = 0;
                } else {
                    stall += 1;
                }
            }
        }
        *converged = stall >= 50;
        Ok((best_val, best_pair.0, best_pair.1))
    };

    for (init_a, init_b) in extra_inits {
        restarts_used += 1;
        let mut run_converged = false;
        let (val, ra, rb) = run_from(init_a.clone(), init_b.clone(), &mut run_converged)?;
        if best.as_ref().is_none_or(|(b, _, _)| val < *b) {
            best = Some((val, ra, rb));
            converged = run_converged;
        }
    }
    for r in 0..config.restarts {
        restarts_used += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
        let init_a = random_density(&mut rng, da);
        let init_b = random_density(&mut rng, db);
        let mut run_converged = false;
        let (val, ra, rb) = run_from(init_a, init_b, &mut run_converged)?;
        if best.as_ref().is_none_or(|(b, _, _)| val < *b) {
            best = Some((val, ra, rb));
            converged = run_converged;
        }
    }

    let (value, rho_a, rho_b) = best.expect("at least one restart");
    Ok(DeltaEstimate {
        value: value.max(0.0),
        rho_a: DensityMatrix::from_valid(rho_a),
        rho_b: DensityMatrix::from_valid(rho_b),
        restarts_used,
        converged,
    })
}

/// Brute-force cross-check of the minimax overlap on small dimensions:
/// enumerates both factors over diagonal-ensemble mixtures of a fixed net of
/// bases, with simplex weights at the given grid resolution, and returns the
/// minimum of the max-overlap objective over the product grid.
pub fn delta_s_grid_oracle(basis: &ProductBasis, resolution: usize) -> Result<f64> {
    let (da, db) = basis.dims();
    if da > 3 || db > 3 {
        return Err(Error::InvalidArgument(format!(
            "grid oracle supports local dimensions up to 3, got {da} x {db}"
        )));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let cands_a = grid_candidates(&basis.a_vectors, da, resolution);
    let cands_b = grid_candidates(&basis.b_vectors, db, resolution);
    let n = basis.len();
    let mut best = f64::INFINITY;
    for a in &cands_a {
        for b in &cands_b {
            let mut worst = f64::NEG_INFINITY;
            for i in 0..n {
                let v = a[i] * b[i];
                if v > worst {
                    worst = v;
                }
            }
            if worst < best {
                best = worst;
            }
        }
    }
    Ok(best)
}

/// Per-candidate member-overlap vectors for all net bases and grid weights.
fn grid_candidates(vectors: &[Vec<C64>], d: usize, resolution: usize) -> Vec<Vec<f64>> {
    let net = basis_net(d);
    let weights = simplex_grid(d, resolution);
    let mut out = Vec::with_capacity(net.len() * weights.len());
    for basis in &net {
        // overlap_rows[i][k] = |<v_i | basis_k>|^2
        let rows: Vec<Vec<f64>> = vectors
            .iter()
            .map(|v| basis.iter().map(|bk| inner(v, bk).norm_sqr()).collect())
            .collect();
        for w in &weights {
            out.push(
                rows.iter()
                    .map(|row| row.iter().zip(w).map(|(m, wk)| m * wk).sum())
                    .collect(),
            );
        }
    }
    out
}

/// Fixed net of orthonormal bases: computational, Fourier, single two-level
/// rotations at three angles with and without a quarter phase, and real
/// compositions of rotations on distinct index pairs.
fn basis_net(d: usize) -> Vec<Vec<Vec<C64>>> {
    let mut nets: Vec<Vec<Vec<C64>>> = Vec::new();
    let columns = |u: &Operator| -> Vec<Vec<C64>> {
        (0..u.dim())
            .map(|k| (0..u.dim()).map(|i| u.get(i, k)).collect())
            .collect()
    };
    let id = Operator::identity(Factorization::single(d));
    nets.push(columns(&id));
    let fourier = Operator::from_fn(Factorization::single(d), |i, k| {
        let phase = 2.0 * std::f64::consts::PI * (i * k) as f64 / d as f64;
        C64::new(phase.cos(), phase.sin()) / (d as f64).sqrt()
    });
    nets.push(columns(&fourier));
    let rotation = |i: usize, j: usize, theta: f64, imaginary: bool| -> Operator {
        let mut u = Operator::identity(Factorization::single(d));
        let (c, s) = (theta.cos(), theta.sin());
        let phase = if imaginary {
            C64::new(0.0, 1.0)
        } else {
            C64::new(1.0, 0.0)
        };
        u.set(i, i, C64::new(c, 0.0));
        u.set(j, j, C64::new(c, 0.0));
        u.set(i, j, -phase.conj() * s);
        u.set(j, i, phase * s);
        u
    };
    let angles = [
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_8,
    ];
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            pairs.push((i, j));
        }
    }
    for &(i, j) in &pairs {
        for &theta in &angles {
            for imaginary in [false, true] {
                nets.push(columns(&rotation(i, j, theta, imaginary)));
            }
        }
    }
    for (pi, &p1) in pairs.iter().enumerate() {
        for &p2 in pairs.iter().skip(pi + 1) {
            for &t1 in &angles {
                for &t2 in &angles {
                    let r1 = rotation(p1.0, p1.1, t1, false);
                    let r2 = rotation(p2.0, p2.1, t2, false);
                    nets.push(columns(&r1.matmul(&r2).expect("same dims")));
                    nets.push(columns(&r2.matmul(&r1).expect("same dims")));
                }
            }
        }
    }
    nets
}

/// All integer compositions of `resolution` into `d` parts, normalized.
fn simplex_grid(d: usize, resolution: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; d];
    fn recurse(
        out: &mut Vec<Vec<f64>>,
        current: &mut Vec<usize>,
        slot: usize,
        left: usize,
        resolution: usize,
    ) {
        if slot + 1 == current.len() {
            current[slot] = left;
            out.push(
                current
                    .iter()
                    .map(|&v| v as f64 / resolution as f64)
                    .collect(),
            );
            return;
        }
        for v in 0..=left {
            current[slot] = v;
            recurse(out, current, slot + 1, left - v, resolution);
        }
    }
    recurse(&mut out, &mut current, 0, resolution, resolution);
    out
}

/// Estimates both sides of the multiplicativity identity
/// `delta(S1 (x) S2) = delta(S1) delta(S2)`.
///
/// The tensor-product run is seeded with the product of the single-factor
/// optima (the constructive content of the submultiplicativity direction),
/// so the reported left side never exceeds the right beyond optimizer
/// tolerance.
pub fn multiplicativity_check(
    s1: &ProductBasis,
    s2: &ProductBasis,
    config: &DeltaConfig,
) -> Result<(f64, f64)> {
    let d1 = delta_s(s1, config)?;
    let d2 = delta_s(s2, config)?;
    let rhs = d1.value * d2.value;
    let tensor = s1.tensor(s2)?;
    let product_init = (
        d1.rho_a
            .op()
            .kron(d2.rho_a.op())?
            .with_factorization(Factorization::single(s1.dims().0 * s2.dims().0))?,
        d1.rho_b
            .op()
            .kron(d2.rho_b.op())?
            .with_factorization(Factorization::single(s1.dims().1 * s2.dims().1))?,
    );
    let lhs = delta_s_with_inits(&tensor, config, &[product_init])?;
    Ok((lhs.value, rhs))
}

/// The hypothesis pair of the separation construction: the uniform mixture
/// over the basis members against the normalized complement projector.
pub fn upb_hypothesis_pair(basis: &ProductBasis) -> Result<HypothesisPair> {
    let p = basis.projector()?;
    let total = p.dim();
    let members = basis.len();
    if members >= total {
        return Err(Error::InvalidArgument(
            "basis spans the whole space; no orthogonal complement state exists".into(),
        ));
    }
    let rho = DensityMatrix::from_valid(p.scale(1.0 / members as f64));
    let id = Operator::identity(p.factorization().clone());
    let sigma = DensityMatrix::from_valid(id.sub(&p)?.scale(1.0 / (total - members) as f64));
    HypothesisPair::new(rho, sigma, 0.5, "upb-separation")
}

/// True iff both the basis projector and its complement have positive
/// partial transpose, which certifies perfect PPT discrimination of the
/// hypothesis pair at every number of copies.
pub fn ppt_perfect_discrimination(basis: &ProductBasis) -> Result<bool> {
    let p = basis.projector()?;
    let id = Operator::identity(p.factorization().clone());
    let tol = 1e-9;
    Ok(p.gamma()?.is_psd(tol)? && id.sub(&p)?.gamma()?.is_psd(tol)?)
}

/// The separable-measurement error lower bound `mu^n / 2` with
/// `mu = delta / N`.
pub fn sep_error_lower_bound(delta: f64, members: usize, n: u32) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::InvalidArgument(
            "extendible basis (delta = 0) admits no separation bound".into(),
        ));
    }
    let mu = delta / members as f64;
    Ok(0.5 * mu.powi(n as i32))
}

/// A found violation of block positivity: a product vector with a negative
/// expectation.
#[derive(Clone, Debug)]
pub struct BlockPositivityWitness {
    pub a_vector: Vec<C64>,
    pub b_vector: Vec<C64>,
    pub value: f64,
}

/// Searches for a product vector `|x> (x) |y>` with negative expectation on
/// `h` by alternating minimal-eigenvector descent on the compressed blocks:
/// fixing `y` reduces the search over `x` to the bottom eigenvector of
/// `(1 (x) <y|) h (1 (x) |y>)`, and symmetrically. Each sweep is monotone,
/// so every restart converges to a local minimum of the product-expectation
/// landscape.
///
/// Returns a witness only when the expectation drops below `-tol` (scaled by
/// the operator norm); absence of a witness is evidence, not a certificate.
pub fn block_positivity_falsifier(
    h: &Operator,
    restarts: usize,
    seed: u64,
) -> Result<Option<BlockPositivityWitness>> {
    let scale = h.max_abs().max(1.0);
    if !h.is_hermitian(1e-9 * scale) {
        return Err(Error::NotHermitian {
            deviation: h.hermitian_deviation(),
        });
    }
    let dims = h.factorization().local_dims();
    if dims.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "falsifier needs a bipartite factorization, got {dims:?}"
        )));
    }
    let (da, db) = (dims[0], dims[1]);
    let tol = 1e-9 * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<BlockPositivityWitness> = None;
    for _ in 0..restarts {
        let mut y = random_unit(&mut rng, db);
        let mut x = random_unit(&mut rng, da);
        let mut value = f64::INFINITY;
        for _ in 0..100 {
            let block_a = compress_b(h, &y, da, db)?;
            let spec = block_a.eig_hermitian()?;
            x = spec.eigenvector(da - 1);
            let block_b = compress_a(h, &x, da, db)?;
            let spec = block_b.eig_hermitian()?;
            y = spec.eigenvector(db - 1);
            let new_value = spec.eigenvalues[db - 1];
            if (value - new_value).abs() < 1e-13 {
                value = new_value;
                break;
            }
            value = new_value;
        }
        if value < -tol && best.as_ref().is_none_or(|w| value < w.value) {
            best = Some(BlockPositivityWitness {
                a_vector: x,
                b_vector: y,
                value,
            });
        }
    }
    Ok(best)
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| {
                C64::new(
                    crate::states::random::standard_normal(rng),
                    crate::states::random::standard_normal(rng),
                )
            })
            .collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// `(1 (x) <y|) h (1 (x) |y>)` as a dA x dA block.
fn compress_b(h: &Operator, y: &[C64], da: usize, db: usize) -> Result<Operator> {
    let mut out = Operator::zeros(Factorization::single(da));
    for i in 0..da {
        for ip in 0..da {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..db {
                for jp in 0..db {
                    acc += y[j].conj() * h.get(i * db + j, ip * db + jp) * y[jp];
                }
            }
            out.set(i, ip, acc);
        }
    }
    Ok(out)
}

/// `(<x| (x) 1) h (|x> (x) 1)` as a dB x dB block.
fn compress_a(h: &Operator, x: &[C64], da: usize, db: usize) -> Result<Operator> {
    let mut out = Operator::zeros(Factorization::single(db));
    for j in 0..db {
        for jp in 0..db {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..da {
                for ip in 0..da {
                    acc += x[i].conj() * h.get(i * db + j, ip * db + jp) * x[ip];
                }
            }
            out.set(j, jp, acc);
        }
    }
    Ok(out)
}

/// Outcome of the separation-witness construction at `n` copies.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub n: u32,
    pub mu: f64,
    pub h_operator: Operator,
    /// `H - rho^{(x)n}/2` passed the positivity check.
    pub psd_check: bool,
    /// Whether the falsifier found a block-positivity counterexample for
    /// `P^{(x)n} - delta^n 1` (it must not, if the delta estimate is sound).
    pub block_pos_falsified: bool,
}

/// Builds the dual-cone witness `H = rho^{(x)n}/2 + (1/2 - mu^n/2)
/// sigma^{(x)n}`, checks `H - rho^{(x)n}/2 >= 0` spectrally, and runs the
/// block-positivity falsifier against `P^{(x)n} - delta^n 1` on the grouped
/// `A^n : B^n` bipartition.
pub fn separation_witness(
    basis: &ProductBasis,
    sigma: &DensityMatrix,
    n: u32,
    delta: f64,
    restarts: usize,
    seed: u64,
) -> Result<SeparationWitness> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    let members = basis.len();
    let mu = delta / members as f64;
    if !(0.0..1.0).contains(&mu) || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside (0, 1)")));
    }
    let pair = upb_hypothesis_pair(basis)?;
    if sigma.op().factorization() != pair.rho0.op().factorization() {
        return Err(Error::DimensionMismatch(
            "sigma does not live on the basis space".into(),
        ));
    }
    let rho_n = pair.rho0.kron_power(n)?;
    let sigma_n = DensityMatrix::from_valid(sigma.op().kron_power(n)?);
    let mu_n = mu.powi(n as i32);
    let h = rho_n
        .op()
        .scale(0.5)
        .add(&sigma_n.op().scale(0.5 - 0.5 * mu_n))?;

    let tail = h.sub(&rho_n.op().scale(0.5))?;
    let psd_check = tail.is_psd(1e-9 * tail.max_abs().max(1.0))?;

    // P^{(x)n} - delta^n on the A^n : B^n cut.
    let p = basis.projector()?;
    let p_n = p.kron_power(n)?;
    let grouped = group_bipartite(&p_n, n)?;
    let id = Operator::identity(grouped.factorization().clone());
    let target = grouped.sub(&id.scale(delta.powi(n as i32)))?;
    let witness = block_positivity_falsifier(&target, restarts, seed)?;

    Ok(SeparationWitness {
        n,
        mu,
        h_operator: h,
        psd_check,
        block_pos_falsified: witness.is_some(),
    })
}

/// Regroups an n-copy operator on `(A B)^n` into the `A^n : B^n` bipartition.
pub fn group_bipartite(op: &Operator, n: u32) -> Result<Operator> {
    let dims = op.factorization().local_dims().to_vec();
    if dims.len() != 2 * n as usize {
        return Err(Error::InvalidArgument(format!(
            "expected {} factors for {n} copies, got {}",
            2 * n,
            dims.len()
        )));
    }
    let mut perm = Vec::with_capacity(dims.len());
    for k in 0..n as usize {
        perm.push(2 * k);
    }
    for k in 0..n as usize {
        perm.push(2 * k + 1);
    }
    let permuted = op.permute_factors(&perm)?;
    let da: usize = (0..n as usize).map(|k| dims[2 * k]).product();
    let db: usize = (0..n as usize).map(|k| dims[2 * k + 1]).product();
    permuted.with_factorization(Factorization::bipartite(da, db)?)
}
