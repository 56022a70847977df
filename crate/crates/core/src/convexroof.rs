//! Convex-roof extension of pure-state functionals.
//!
//! Every decomposition `ρ = Σ p_i |ψ_i⟩⟨ψ_i|` with `m` members is
//! `W = F V*` for the spectral factor `F` (d x r, `F F† = ρ`) and an
//! `r x m` isometry `V`; column `i` of `W` is `√p_i |ψ_i⟩`. Right-multiplying
//! `W` by an `m x m` unitary moves between decompositions, so the search runs
//! over unitaries, one 2x2 complex rotation of a column pair at a time.
//!
//! The objectives are written as degree-2 homogeneous functions of the
//! unnormalized columns, `g(√p ψ) = p f(ψ)`, so a rotation only needs the two
//! affected columns to be re-evaluated.

use std::fmt;

use rand::Rng;

use nalgebra::ComplexField;

use crate::entanglement::{minor_sum, pure_concurrence, wootters_concurrence};
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_diff, psd_factor};
use crate::measures::{
    pure_coherence_concurrence, pure_intrinsic_randomness, qubit_coherence_concurrence,
    qubit_intrinsic_randomness, Certification,
};
use crate::scalar::{cplx, entropy_term, lit, to_f64, CMatrix, Real, C};
use crate::statespace::{
    random_unitary_with, seeded_rng, BipartiteSplit, DensityMatrix, Ensemble, EnsembleMember,
    PureState, PRUNE_PROBABILITY,
};

/// Continuation schedule for the smoothing parameter; the last stage is
/// the exact objective.
const SMOOTHING: [f64; 2] = [1e-3, 0.0];

/// Largest allowed `|V V† - I|` for a decomposition isometry.
pub const ISOMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofConfig {
    /// Number of ensemble members; `None` picks `min(r², d r)`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Maximum number of full sweeps over column pairs per restart.
    pub max_iterations: usize,
    /// A restart stops once a sweep improves the objective by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        RoofConfig {
            ensemble_size: None,
            restarts: 8,
            max_iterations: 200,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_ensemble_size(mut self, m: usize) -> Self {
        self.ensemble_size = Some(m);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn resolve_size(&self, dim: usize, rank: usize) -> Result<usize> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        let m = self
            .ensemble_size
            .unwrap_or_else(|| (rank * rank).min(dim * rank).max(rank));
        if m < rank {
            return Err(Error::InvalidConfig(format!(
                "ensemble size {m} smaller than rank {rank}"
            )));
        }
        Ok(m)
    }
}

/// Pure-state functional whose convex roof is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoofObjective {
    CoherenceConcurrence,
    IntrinsicRandomness,
    EntanglementConcurrence(BipartiteSplit),
}

impl RoofObjective {
    /// Parses the CLI tags `cc`, `ri`, `ce`; `ce` needs a split.
    pub fn from_tag(tag: &str, split: Option<BipartiteSplit>) -> Result<Self> {
        match (tag, split) {
            ("cc", _) => Ok(RoofObjective::CoherenceConcurrence),
            ("ri", _) => Ok(RoofObjective::IntrinsicRandomness),
            ("ce", Some(s)) => Ok(RoofObjective::EntanglementConcurrence(s)),
            ("ce", None) => Err(Error::BadObjective(
                "'ce' requires a bipartite split".into(),
            )),
            (other, _) => Err(Error::BadObjective(format!("unknown objective '{other}'"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RoofObjective::CoherenceConcurrence => "cc",
            RoofObjective::IntrinsicRandomness => "ri",
            RoofObjective::EntanglementConcurrence(_) => "ce",
        }
    }

    /// Value on a normalized pure state.
    pub fn pure_value<T: Real>(&self, psi: &PureState<T>) -> T {
        match self {
            RoofObjective::CoherenceConcurrence => pure_coherence_concurrence(psi),
            RoofObjective::IntrinsicRandomness => pure_intrinsic_randomness(psi),
            RoofObjective::EntanglementConcurrence(split) => {
                pure_concurrence(psi, *split).expect("split checked before optimization")
            }
        }
    }

    /// `p f(ψ)` for the column `w = √p ψ`. A positive `mu` smooths the
    /// kinks at vanishing amplitudes; `mu = 0` is the exact objective.
    fn weighted<T: Real>(&self, w: &[C<T>], mu: T) -> T {
        match self {
            RoofObjective::CoherenceConcurrence => {
                // Σ_{j≠k} |w_j||w_k| = (Σ|w_j|)² - Σ|w_j|²
                let (mut s1, mut s2) = (T::zero(), T::zero());
                for z in w {
                    let a = if mu > T::zero() {
                        (z.norm_sqr() + mu * mu).sqrt() - mu
                    } else {
                        z.modulus()
                    };
                    s1 += a;
                    s2 += a * a;
                }
                (s1 * s1 - s2).max(T::zero())
            }
            RoofObjective::IntrinsicRandomness => {
                let n: T = w.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
                if n <= T::zero() {
                    return T::zero();
                }
                w.iter()
                    .fold(T::zero(), |a, z| a + entropy_term(z.norm_sqr() / n))
                    * n
            }
            RoofObjective::EntanglementConcurrence(split) => {
                let m = minor_sum(w, *split);
                if mu > T::zero() {
                    lit::<T>(2.0) * ((m + mu * mu).sqrt() - mu)
                } else {
                    lit::<T>(2.0) * m.sqrt()
                }
            }
        }
    }
}

impl fmt::Display for RoofObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofResult<T: Real> {
    /// Weighted objective of `ensemble`; an upper bound on the roof.
    pub value: T,
    pub ensemble: Ensemble<T>,
    pub certification: Certification,
    /// Sweeps used by the winning restart.
    pub iterations_used: usize,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<T>,
    pub best_restart: usize,
    /// Closed-form value where one is known (qubit coherence measures,
    /// two-qubit concurrence).
    pub reference: Option<T>,
    /// Set when `value` exceeds `reference` by more than the configured
    /// tolerance.
    pub flagged: bool,
}

/// Ensemble `{p_i, ψ_i}` with `√p_i |ψ_i⟩ = Σ_k V*_{k,i} √λ_k |e_k⟩`.
pub fn decomposition_from_isometry<T: Real>(
    rho: &DensityMatrix<T>,
    v: &CMatrix<T>,
) -> Result<Ensemble<T>> {
    let (_, f) = psd_factor(rho.matrix());
    let r = f.ncols();
    if v.nrows() != r {
        return Err(Error::DimMismatch {
            expected: r,
            got: v.nrows(),
        });
    }
    let deviation = max_abs_diff(&(v * v.adjoint()), &CMatrix::identity(r, r));
    if deviation > lit(ISOMETRY_TOL) {
        return Err(Error::NotIsometry {
            deviation: to_f64(deviation),
        });
    }
    let w = f * linalg::conj(v);
    Ok(ensemble_from_columns(&w))
}

fn ensemble_from_columns<T: Real>(w: &CMatrix<T>) -> Ensemble<T> {
    let cutoff = lit::<T>(PRUNE_PROBABILITY);
    let members = w
        .column_iter()
        .filter_map(|col| {
            let p = col.norm_squared();
            if p < cutoff {
                return None;
            }
            let state = PureState::from_unnormalized(col.into_owned()).ok()?;
            Some(EnsembleMember {
                probability: p,
                state,
            })
        })
        .collect();
    Ensemble::from_trusted(members)
}

struct Search<'a, T: Real> {
    objective: &'a RoofObjective,
    mu: T,
    d: usize,
    /// Column-major `d x m` decomposition matrix.
    cols: Vec<C<T>>,
    values: Vec<T>,
    scratch_a: Vec<C<T>>,
    scratch_b: Vec<C<T>>,
}

impl<'a, T: Real> Search<'a, T> {
    fn new(objective: &'a RoofObjective, w: &CMatrix<T>) -> Self {
        let d = w.nrows();
        let cols: Vec<C<T>> = w.iter().copied().collect();
        let values = (0..w.ncols())
            .map(|i| objective.weighted(&cols[i * d..(i + 1) * d], T::zero()))
            .collect();
        Search {
            objective,
            mu: T::zero(),
            d,
            cols,
            values,
            scratch_a: vec![cplx(T::zero(), T::zero()); d],
            scratch_b: vec![cplx(T::zero(), T::zero()); d],
        }
    }

    fn m(&self) -> usize {
        self.values.len()
    }

    fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }

    fn column(&self, i: usize) -> &[C<T>] {
        &self.cols[i * self.d..(i + 1) * self.d]
    }

    fn is_zero(&self, i: usize) -> bool {
        self.column(i).iter().all(|z| z.norm_sqr() == T::zero())
    }

    /// Objective of the pair after the rotation
    /// `a' = c a + s e^{iφ} b`, `b' = -s e^{-iφ} a + c b`.
    fn rotated(&mut self, a: usize, b: usize, theta: T, phi: T) -> T {
        let (c, s) = (theta.cos(), theta.sin());
        let e = cplx(phi.cos(), phi.sin());
        let se = e * s;
        let se_conj = e.conj() * s;
        let d = self.d;
        for t in 0..d {
            let x = self.cols[a * d + t];
            let y = self.cols[b * d + t];
            self.scratch_a[t] = x * c + y * se;
            self.scratch_b[t] = y * c - x * se_conj;
        }
        self.objective.weighted(&self.scratch_a, self.mu)
            + self.objective.weighted(&self.scratch_b, self.mu)
    }

    fn commit(&mut self, a: usize, b: usize, theta: T, phi: T) {
        self.rotated(a, b, theta, phi);
        let d = self.d;
        self.cols[a * d..(a + 1) * d].copy_from_slice(&self.scratch_a);
        self.cols[b * d..(b + 1) * d].copy_from_slice(&self.scratch_b);
        self.values[a] = self.objective.weighted(&self.scratch_a, self.mu);
        self.values[b] = self.objective.weighted(&self.scratch_b, self.mu);
    }

    fn set_smoothing(&mut self, mu: T) {
        self.mu = mu;
        let d = self.d;
        for i in 0..self.values.len() {
            self.values[i] = self.objective.weighted(&self.cols[i * d..(i + 1) * d], mu);
        }
    }

    /// Probes a coarse grid of rotations plus two small rings around the
    /// identity; if any probe improves, refines it with a shrinking pattern
    /// search. Returns the improvement made on this pair.
    fn optimize_pair(&mut self, a: usize, b: usize) -> T {
        const GRID_THETA: usize = 4;
        const PHASES: usize = 8;
        const RINGS: [f64; 2] = [1e-3, 1e-6];
        let current = self.values[a] + self.values[b];
        let pi = T::pi();
        // improvements below rounding level would let the search wander
        let eps = lit::<T>(1e-15) * (current + T::one());
        let (mut best_t, mut best_p, mut best) = (T::zero(), T::zero(), current);
        let mut probe = |search: &mut Self, t: T, p: T| {
            let v = search.rotated(a, b, t, p);
            if v < best - eps {
                best = v;
                best_t = t;
                best_p = p;
            }
        };
        for j in 0..PHASES {
            let p = pi * lit(2.0 * j as f64 / PHASES as f64);
            for i in 1..GRID_THETA {
                probe(self, pi * lit(i as f64 / (2 * GRID_THETA) as f64), p);
            }
            for r in RINGS {
                probe(self, lit(r), p);
            }
        }
        if best >= current {
            return T::zero();
        }
        let mut step_t = lit::<T>(1e-2).min(best_t * lit(0.5));
        let mut step_p = pi * lit(1.0 / PHASES as f64);
        let min_step = lit::<T>(1e-10);
        let moves: [(f64, f64); 8] = [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ];
        // expand on success, shrink on failure; the cap bounds crawling along
        // the ridges of the nonsmooth objectives
        let (max_t, max_p) = (lit::<T>(0.25), pi * lit(0.25));
        let mut budget = 400;
        while step_t > min_step && budget > 0 {
            budget -= 1;
            let mut improved = false;
            for (mt, mp) in moves {
                let t = best_t + step_t * lit(mt);
                let p = best_p + step_p * lit(mp);
                let v = self.rotated(a, b, t, p);
                if v < best - eps {
                    best = v;
                    best_t = t;
                    best_p = p;
                    improved = true;
                    break;
                }
            }
            if improved {
                step_t = (step_t * lit(2.0)).min(max_t);
                step_p = (step_p * lit(2.0)).min(max_p);
            } else {
                step_t *= lit(0.5);
                step_p *= lit(0.5);
            }
        }
        self.commit(a, b, best_t, best_p);
        let now = self.values[a] + self.values[b];
        if now < current {
            current - now
        } else {
            T::zero()
        }
    }

    fn sweep(&mut self) -> T {
        let m = self.m();
        let mut gain = T::zero();
        for a in 0..m {
            for b in (a + 1)..m {
                if self.is_zero(a) && self.is_zero(b) {
                    continue;
                }
                gain += self.optimize_pair(a, b);
            }
        }
        gain
    }

    fn into_matrix(self) -> CMatrix<T> {
        let m = self.values.len();
        CMatrix::from_column_slice(self.d, m, &self.cols)
    }
}

fn initial_isometry<T: Real, R: Rng + ?Sized>(
    restart: usize,
    r: usize,
    m: usize,
    rng: &mut R,
) -> CMatrix<T> {
    if restart == 0 {
        // spectral decomposition padded with empty members
        CMatrix::identity(r, m)
    } else {
        random_unitary_with::<T, R>(m, rng).rows(0, r).into_owned()
    }
}

/// Minimizes the average objective over decompositions of `rho`. Restart 0
/// starts from the spectral decomposition, restart `k > 0` from a Haar
/// isometry drawn from stream `k` of `config.seed`.
pub fn convex_roof_minimize<T: Real>(
    rho: &DensityMatrix<T>,
    objective: RoofObjective,
    config: &RoofConfig,
) -> Result<RoofResult<T>> {
    if let RoofObjective::EntanglementConcurrence(split) = objective {
        split.check(rho.dim())?;
    }
    let (_, f) = psd_factor(rho.matrix());
    let (d, r) = f.shape();
    let m = config.resolve_size(d, r)?;
    let tol = lit::<T>(config.tolerance);

    let mut best: Option<(T, CMatrix<T>, usize, usize)> = None;
    let mut restart_values = Vec::with_capacity(config.restarts);
    for k in 0..config.restarts {
        let mut rng = seeded_rng(config.seed, k as u64);
        let v = initial_isometry::<T, _>(k, r, m, &mut rng);
        let w = &f * linalg::conj(&v);
        let mut search = Search::new(&objective, &w);
        let mut sweeps = 0;
        if r > 1 {
            for mu in SMOOTHING {
                search.set_smoothing(lit(mu));
                // smoothed stages only need to land in the right basin
                let stage_tol = if mu > 0.0 { tol.max(lit(1e-6)) } else { tol };
                let mut stage = 0;
                while stage < config.max_iterations {
                    stage += 1;
                    if search.sweep() < stage_tol {
                        break;
                    }
                }
                sweeps += stage;
            }
        }
        let value = search.total();
        restart_values.push(value);
        if best.as_ref().is_none_or(|(b, ..)| value < *b) {
            best = Some((value, search.into_matrix(), sweeps, k));
        }
    }
    let (_, w, iterations_used, best_restart) = best.expect("at least one restart");
    let ensemble = ensemble_from_columns(&w);
    let value = ensemble.average(|psi| objective.pure_value(psi));
    let reference = closed_form_reference(rho, &objective)?;
    let flagged = reference.is_some_and(|exact| value > exact + tol);
    Ok(RoofResult {
        value,
        ensemble,
        certification: Certification::UpperBound,
        iterations_used,
        restart_values,
        best_restart,
        reference,
        flagged,
    })
}

fn closed_form_reference<T: Real>(
    rho: &DensityMatrix<T>,
    objective: &RoofObjective,
) -> Result<Option<T>> {
    Ok(match objective {
        RoofObjective::CoherenceConcurrence if rho.dim() == 2 => {
            Some(qubit_coherence_concurrence(rho)?)
        }
        RoofObjective::IntrinsicRandomness if rho.dim() == 2 => {
            Some(qubit_intrinsic_randomness(rho)?)
        }
        RoofObjective::EntanglementConcurrence(s) if s.dim_s == 2 && s.dim_a == 2 => {
            Some(wootters_concurrence(rho)?)
        }
        _ => None,
    })
}

/// Convex roof of the coherence concurrence.
pub fn coherence_concurrence<T: Real>(
    rho: &DensityMatrix<T>,
    config: &RoofConfig,
) -> Result<RoofResult<T>> {
    convex_roof_minimize(rho, RoofObjective::CoherenceConcurrence, config)
}

/// Convex roof of the population entropy (intrinsic randomness).
pub fn intrinsic_randomness<T: Real>(
    rho: &DensityMatrix<T>,
    config: &RoofConfig,
) -> Result<RoofResult<T>> {
    convex_roof_minimize(rho, RoofObjective::IntrinsicRandomness, config)
}

/// Upper bound on the mixed-state entanglement concurrence.
pub fn mixed_concurrence_upper<T: Real>(
    rho: &DensityMatrix<T>,
    split: BipartiteSplit,
    config: &RoofConfig,
) -> Result<RoofResult<T>> {
    convex_roof_minimize(rho, RoofObjective::EntanglementConcurrence(split), config)
}
