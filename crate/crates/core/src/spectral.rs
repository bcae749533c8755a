//! Eigensolving, spectral projections, resolvents, the Kato commutator
//! operator, quasi-locality norms, localization diagnostics, and disorder
//! statistics.
//!
//! The Kato operator X_A = (1/2π)Σ_j(−1)^j ∫ R_{ix+E_j} A R_{ix+E_j} dx is
//! evaluated in closed form in the eigenbasis: the x-integral reduces to the
//! kernel (χ_in(a) − χ_in(b))/(λ_a − λ_b), which makes the commutator
//! identity [H, X_A] = [P, A] hold to rounding. A quadrature evaluation is
//! kept in the tests as an independent cross-check.

use crate::lattice::{region_distance, DistanceWeights, Region, TorusGeometry};
use crate::numerics::fit::{decay_fit, linear_fit, FitResult};
use crate::numerics::resolvent_integrals::two_resolvent_kernel;
use crate::operators::{build_anderson, DisorderEnsemble, OperatorKernel};
use crate::{linalg, C64, CMat, CVec, LabError, Result};
use serde::{Deserialize, Serialize};

/// Closed or open energy interval.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Closed endpoints when true.
    pub closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.closed {
            x >= self.lo && x <= self.hi
        } else {
            x > self.lo && x < self.hi
        }
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Interval with the same center and width scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Interval {
        let c = self.center();
        let h = 0.5 * self.width() * factor;
        Interval {
            lo: c - h,
            hi: c + h,
            closed: self.closed,
        }
    }

    /// Widened by `delta` on both sides.
    pub fn widened(&self, delta: f64) -> Interval {
        Interval {
            lo: self.lo - delta,
            hi: self.hi + delta,
            closed: self.closed,
        }
    }
}

/// Full dense eigendecomposition of a Hermitian kernel.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub region: Region,
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, orthonormal, deterministic gauge.
    pub eigenvectors: CMat,
    /// FNV-style fingerprint of the parent kernel bytes.
    pub kernel_hash: u64,
    pub kernel_norm: f64,
}

fn kernel_hash(m: &CMat) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for v in m.iter() {
        for bits in [v.re.to_bits(), v.im.to_bits()] {
            h ^= bits;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
    }
    h
}

/// Full dense Hermitian decomposition with deterministic ordering.
pub fn eigendecompose(kernel: &OperatorKernel) -> Result<SpectralData> {
    let (eigenvalues, eigenvectors) = linalg::eigh(&kernel.matrix)?;
    let kernel_norm = eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    Ok(SpectralData {
        region: kernel.region.clone(),
        eigenvalues,
        eigenvectors,
        kernel_hash: kernel_hash(&kernel.matrix),
        kernel_norm,
    })
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> CVec {
        CVec::from_iter(self.eigenvectors.column(i).iter().copied())
    }

    /// Distance from z to the spectrum.
    pub fn dist_to_spectrum(&self, z: C64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|&l| (C64::new(l, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Indices of eigenvalues inside J.
    pub fn indices_in(&self, j: &Interval) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| j.contains(self.eigenvalues[i]))
            .collect()
    }

    /// Rebuild Σ f(λ)|v⟩⟨v| for a scalar function of the eigenvalues.
    pub fn function_of(&self, f: impl Fn(f64) -> C64) -> CMat {
        let mut scaled = self.eigenvectors.clone();
        for ((_, j), v) in scaled.indexed_iter_mut() {
            *v *= f(self.eigenvalues[j]);
        }
        linalg::matmul(&scaled, &linalg::adjoint(&self.eigenvectors))
    }
}

/// Tag recording how a projector was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectorTag {
    SpectralInterval,
    Patch,
    Compressed,
    Wannier,
}

/// Dense Hermitian (near-)projection over a region.
#[derive(Clone, Debug)]
pub struct Projector {
    pub region: Region,
    pub matrix: CMat,
    pub tag: ProjectorTag,
    pub rank: usize,
}

impl Projector {
    pub fn zero(region: Region) -> Self {
        let n = region.len();
        Projector {
            region,
            matrix: CMat::zeros((n, n)),
            tag: ProjectorTag::SpectralInterval,
            rank: 0,
        }
    }

    /// Idempotency defect ‖P² − P‖.
    pub fn idempotency_defect(&self) -> f64 {
        let p2 = linalg::matmul(&self.matrix, &self.matrix);
        linalg::op_norm(&(&p2 - &self.matrix))
    }

    pub fn complement(&self) -> Projector {
        let n = self.matrix.nrows();
        Projector {
            region: self.region.clone(),
            matrix: &CMat::eye(n) - &self.matrix,
            tag: self.tag,
            rank: n - self.rank,
        }
    }
}

/// Spectral projection of the decomposed kernel onto J.
pub fn spectral_projection(sd: &SpectralData, j: &Interval) -> Projector {
    let idx = sd.indices_in(j);
    let n = sd.dim();
    let mut acc = CMat::zeros((n, n));
    for &i in &idx {
        let v = sd.eigenvector(i);
        for a in 0..n {
            for b in 0..n {
                acc[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    Projector {
        region: sd.region.clone(),
        matrix: linalg::hermitize(&acc),
        tag: ProjectorTag::SpectralInterval,
        rank: idx.len(),
    }
}

/// Resolvent (H − z)^{−1} via the eigenbasis.
pub fn resolvent(sd: &SpectralData, z: C64) -> Result<CMat> {
    let dist = sd.dist_to_spectrum(z);
    if dist <= 1e-12 * (1.0 + sd.kernel_norm) {
        return Err(LabError::Singularity(format!(
            "z = {z} within {dist:.3e} of the spectrum"
        )));
    }
    Ok(sd.function_of(|l| (C64::new(l, 0.0) - z).inv()))
}

/// Kato's operator X_A for the spectral window [e1, e2], in closed form.
///
/// Preconditions: e1 < e2, both at positive distance `gap` from the
/// spectrum; the caller's Δ is gap/2 under the convention dist ≥ 2Δ.
pub fn kato_operator(sd: &SpectralData, a: &CMat, e1: f64, e2: f64) -> Result<CMat> {
    if e1 >= e2 {
        return Err(LabError::Precondition("kato window needs e1 < e2".into()));
    }
    let gap = sd
        .dist_to_spectrum(C64::new(e1, 0.0))
        .min(sd.dist_to_spectrum(C64::new(e2, 0.0)));
    if gap <= 1e-12 * (1.0 + sd.kernel_norm) {
        return Err(LabError::Precondition(format!(
            "window endpoints touch the spectrum (gap {gap:.3e})"
        )));
    }
    let v = &sd.eigenvectors;
    let a_eig = linalg::matmul(&linalg::adjoint(v), &linalg::matmul(a, v));
    let kern = two_resolvent_kernel(&sd.eigenvalues, e1, e2);
    let mut x_eig = a_eig;
    for ((i, j), val) in x_eig.indexed_iter_mut() {
        *val *= C64::new(kern[(i, j)], 0.0);
    }
    Ok(linalg::matmul(v, &linalg::matmul(&x_eig, &linalg::adjoint(v))))
}

/// Outcome of a weighted-norm evaluation ‖e^{−cρ} K e^{cρ}‖.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedNorm {
    pub value: f64,
    /// True when exponent overflow forced evaluation at a reduced c.
    pub rescaled: bool,
    pub c_effective: f64,
}

/// Weighted operator norm ‖e^{−c·ρ^ℓ_A} K e^{c·ρ^ℓ_A}‖ on the region `theta`
/// the matrix is indexed by. Entries are conjugated in exponent arithmetic;
/// if the conjugated matrix would overflow, c is reduced and the fallback is
/// reported.
pub fn weighted_norm(
    k: &CMat,
    theta: &Region,
    a: &Region,
    c: f64,
    ell: usize,
) -> Result<WeightedNorm> {
    let w = DistanceWeights::new(a, c, ell)?;
    let rho = w.rho_on(theta);
    let n = theta.len();
    assert_eq!(k.nrows(), n, "matrix/region mismatch");
    let mut c_eff = c;
    let mut rescaled = false;
    'retry: loop {
        let mut out = CMat::zeros((n, n));
        for x in 0..n {
            for y in 0..n {
                let kxy = k[(x, y)];
                if kxy == C64::new(0.0, 0.0) {
                    continue;
                }
                let expo = c_eff * (rho[y] - rho[x]);
                let ln_mag = kxy.norm().ln() + expo;
                if ln_mag > 700.0 {
                    // overflow: halve c and retry
                    c_eff *= 0.5;
                    rescaled = true;
                    if c_eff < 1e-12 {
                        return Err(LabError::Conditioning(
                            "weighted norm overflows even at c ≈ 0".into(),
                        ));
                    }
                    continue 'retry;
                }
                out[(x, y)] = kxy * C64::new(expo.exp(), 0.0);
            }
        }
        return Ok(WeightedNorm {
            value: linalg::op_norm(&out),
            rescaled,
            c_effective: c_eff,
        });
    }
}

/// Per-eigenvector localization diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalizationEntry {
    pub eigenvalue: f64,
    /// Global site index of the localization center (argmax |ψ|²).
    pub center: usize,
    /// Mass M(ψ) = |ψ(center)|².
    pub mass: f64,
    /// Fitted exponential decay rate of |ψ| vs region distance.
    pub decay: Option<FitResult>,
    /// Worst log-excess of |ψ(y)| over e^{−c·|y−x|_Θ} beyond √ℓ (≤ 0 passes).
    pub bound_residual: f64,
    pub bound_pass: bool,
    /// (ν,θ)-localization check |ψ(y)|² ≤ θ^{−1}⟨x⟩² e^{−ν|y−x|}.
    pub nu_theta_pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub entries: Vec<LocalizationEntry>,
    pub c_bound: f64,
    pub ell: usize,
    pub nu: f64,
    pub theta: f64,
}

impl LocalizationReport {
    pub fn pass_fraction(&self) -> f64 {
        if self.entries.is_empty() {
            return 1.0;
        }
        self.entries.iter().filter(|e| e.bound_pass).count() as f64 / self.entries.len() as f64
    }
}

/// Localization centers, masses, decay fits and bound checks for every
/// eigenvector. `c_bound` is the decay rate in the |ψ(y)| ≤ e^{−c|y−x|_Θ}
/// test applied beyond distance √ℓ; (ν, θ) parametrize the quadratic-envelope
/// check with ⟨x⟩ measured from site 0.
pub fn localization_report(
    sd: &SpectralData,
    c_bound: f64,
    ell: usize,
    nu: f64,
    theta: f64,
) -> Result<LocalizationReport> {
    let region = &sd.region;
    let n = sd.dim();
    let sqrt_ell = (ell as f64).sqrt();
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let v = sd.eigenvector(i);
        // center: argmax |ψ|², ties broken by smallest site index
        let mut center_local = 0;
        let mut best = -1.0;
        for (x, val) in v.iter().enumerate() {
            let m = val.norm_sqr();
            if m > best + 1e-15 {
                best = m;
                center_local = x;
            }
        }
        let center = region.sites[center_local];
        let mass = best;
        let mut dists = Vec::new();
        let mut mags = Vec::new();
        let mut residual = f64::NEG_INFINITY;
        let mut nu_theta_pass = true;
        let x_norm = region.geom.distance(center, 0) as f64;
        let bracket = 1.0 + x_norm * x_norm;
        for (y, val) in v.iter().enumerate() {
            let site = region.sites[y];
            let d = region_distance(site, center, region)?;
            let mag = val.norm();
            if d >= sqrt_ell {
                if mag > 1e-14 {
                    dists.push(d);
                    mags.push(mag);
                    residual = residual.max(mag.ln() + c_bound * d);
                } else {
                    residual = residual.max(f64::NEG_INFINITY);
                }
            }
            // (ν,θ) envelope uses the plain torus distance
            let dt = region.geom.distance(site, center) as f64;
            if mag * mag > bracket / theta * (-nu * dt).exp() + 1e-15 {
                nu_theta_pass = false;
            }
        }
        let decay = decay_fit(&dists, &mags);
        let bound_pass = residual <= 0.0;
        entries.push(LocalizationEntry {
            eigenvalue: sd.eigenvalues[i],
            center,
            mass,
            decay,
            bound_residual: if residual.is_finite() { residual } else { 0.0 },
            bound_pass,
            nu_theta_pass,
        });
    }
    Ok(LocalizationReport {
        entries,
        c_bound,
        ell,
        nu,
        theta,
    })
}

/// Eigenfunction correlator Σ_{λ∈J} |P_{λ}(x,y)| with eigenvalues grouped at
/// relative tolerance `tol_degeneracy` (multiplicity handling).
pub fn eigenfunction_correlator(
    sd: &SpectralData,
    x: usize,
    y: usize,
    j: &Interval,
    tol_degeneracy: f64,
) -> Result<f64> {
    let a = sd
        .region
        .local_index(x)
        .ok_or_else(|| LabError::Domain(format!("site {x} outside region")))?;
    let b = sd
        .region
        .local_index(y)
        .ok_or_else(|| LabError::Domain(format!("site {y} outside region")))?;
    let tol = tol_degeneracy * (1.0 + sd.kernel_norm);
    let n = sd.dim();
    let mut total = 0.0;
    let mut i = 0;
    while i < n {
        // eigenvalue cluster [i, k)
        let mut k = i + 1;
        while k < n && (sd.eigenvalues[k] - sd.eigenvalues[k - 1]).abs() <= tol {
            k += 1;
        }
        let mean = sd.eigenvalues[i..k].iter().sum::<f64>() / (k - i) as f64;
        if j.contains(mean) {
            let mut p = C64::new(0.0, 0.0);
            for c in i..k {
                p += sd.eigenvectors[(a, c)] * sd.eigenvectors[(b, c)].conj();
            }
            total += p.norm();
        }
        i = k;
    }
    Ok(total)
}

/// Ensemble statistics configuration (Anderson model on a torus or a
/// sub-region of it).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StatisticsConfig {
    pub lambda: f64,
    pub hopping_sign: i32,
    /// Reference energy for the Wegner distance statistic.
    pub e_ref: f64,
    /// Counting window for Minami / IDOS statistics.
    pub j: Interval,
    pub nu_grid: Vec<f64>,
    pub n_max: usize,
    pub n_realizations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StatisticsRecord {
    pub config: StatisticsConfig,
    /// Empirical P(dist(E, σ) ≤ ν) per ν in the grid, with Wilson CIs.
    pub wegner: Vec<(f64, f64, (f64, f64))>,
    /// Empirical P(tr χ_J ≥ n) for n = 1..=n_max.
    pub minami: Vec<(usize, f64)>,
    /// Quantiles (min, 10%, 50%) of the minimal level spacing.
    pub spacing_min: f64,
    pub spacing_q10: f64,
    pub spacing_median: f64,
    /// IDOS tr(χ_Λ P_J)/|Λ|: mean and standard error.
    pub idos_mean: f64,
    pub idos_stderr: f64,
    /// Linear fit of the Wegner frequency against ν·|Θ|.
    pub wegner_fit: Option<FitResult>,
}

/// Wegner / Minami / level-spacing / IDOS estimators over a disorder
/// ensemble on the given torus.
pub fn disorder_statistics(
    ensemble: &DisorderEnsemble,
    geom: TorusGeometry,
    cfg: &StatisticsConfig,
) -> Result<StatisticsRecord> {
    let n = geom.site_count();
    let runs = cfg.n_realizations;
    let mut wegner_hits = vec![0usize; cfg.nu_grid.len()];
    let mut minami_hits = vec![0usize; cfg.n_max];
    let mut min_spacings = Vec::with_capacity(runs);
    let mut idos_samples = Vec::with_capacity(runs);
    for k in 0..runs {
        let (omega, ids) = ensemble.realize(geom, k as u64);
        let h = build_anderson(geom, &omega, &ids, cfg.hopping_sign, cfg.lambda)?;
        let (vals, _) = linalg::eigh(&h.matrix)?;
        let dist = vals
            .iter()
            .map(|&l| (l - cfg.e_ref).abs())
            .fold(f64::INFINITY, f64::min);
        for (i, &nu) in cfg.nu_grid.iter().enumerate() {
            if dist <= nu {
                wegner_hits[i] += 1;
            }
        }
        let count = vals.iter().filter(|&&l| cfg.j.contains(l)).count();
        for m in 1..=cfg.n_max {
            if count >= m {
                minami_hits[m - 1] += 1;
            }
        }
        let min_sp = vals
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        min_spacings.push(min_sp);
        idos_samples.push(count as f64 / n as f64);
    }
    min_spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |f: f64| min_spacings[((runs as f64 - 1.0) * f) as usize];
    let idos_mean = idos_samples.iter().sum::<f64>() / runs as f64;
    let idos_var = idos_samples
        .iter()
        .map(|v| (v - idos_mean) * (v - idos_mean))
        .sum::<f64>()
        / (runs.max(2) - 1) as f64;
    let wegner: Vec<(f64, f64, (f64, f64))> = cfg
        .nu_grid
        .iter()
        .zip(&wegner_hits)
        .map(|(&nu, &hits)| {
            (
                nu,
                hits as f64 / runs as f64,
                crate::numerics::fit::wilson_interval(hits, runs),
            )
        })
        .collect();
    let xs: Vec<f64> = cfg.nu_grid.iter().map(|&nu| nu * n as f64).collect();
    let ys: Vec<f64> = wegner.iter().map(|w| w.1).collect();
    Ok(StatisticsRecord {
        config: cfg.clone(),
        wegner,
        minami: (1..=cfg.n_max)
            .map(|m| (m, minami_hits[m - 1] as f64 / runs as f64))
            .collect(),
        spacing_min: min_spacings[0],
        spacing_q10: q(0.1),
        spacing_median: q(0.5),
        idos_mean,
        idos_stderr: (idos_var / runs as f64).sqrt(),
        wegner_fit: linear_fit(&xs, &ys),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FractionalMomentProbe {
    pub q: f64,
    pub eta: f64,
    pub fit: Option<FitResult>,
    /// Same fit at 10η for regularization sensitivity.
    pub fit_eta10: Option<FitResult>,
    /// Mean |G(x0,x0)|^q at zero distance.
    pub onsite_mean: f64,
}

/// Monte-Carlo average of |(H^Θ − E − iη)^{−1}(x0, y)|^q against |x0−y|_Θ,
/// with an exponential fit of the decay.
pub fn fractional_moment_probe(
    ensemble: &DisorderEnsemble,
    geom: TorusGeometry,
    theta: &Region,
    lambda: f64,
    e: f64,
    q: f64,
    eta: f64,
    n_realizations: usize,
    x0: usize,
) -> Result<FractionalMomentProbe> {
    if !(0.0 < q && q < 1.0) {
        return Err(LabError::Precondition("need 0 < q < 1".into()));
    }
    if eta <= 0.0 {
        return Err(LabError::Precondition("need η > 0".into()));
    }
    let a = theta
        .local_index(x0)
        .ok_or_else(|| LabError::Domain("probe site outside region".into()))?;
    let nloc = theta.len();
    let mut acc = vec![0.0_f64; nloc];
    let mut acc10 = vec![0.0_f64; nloc];
    for k in 0..n_realizations {
        let (omega, ids) = ensemble.realize(geom, k as u64);
        let h = build_anderson(geom, &omega, &ids, -1, lambda)?.restrict(theta)?;
        for (dst, etav) in [(&mut acc, eta), (&mut acc10, 10.0 * eta)] {
            let mut m = h.matrix.clone();
            for i in 0..nloc {
                m[(i, i)] -= C64::new(e, etav);
            }
            let mut rhs = CVec::zeros(nloc);
            rhs[a] = C64::new(1.0, 0.0);
            let g = linalg::solve_vec(&m, &rhs)?;
            for (y, gv) in g.iter().enumerate() {
                dst[y] += gv.norm().powf(q);
            }
        }
    }
    let mut by_dist: std::collections::BTreeMap<i64, (f64, usize)> = Default::default();
    let mut by_dist10: std::collections::BTreeMap<i64, (f64, usize)> = Default::default();
    for y in 0..nloc {
        let d = region_distance(theta.sites[y], x0, theta)?;
        let key = d.round() as i64;
        let e0 = by_dist.entry(key).or_insert((0.0, 0));
        e0.0 += acc[y] / n_realizations as f64;
        e0.1 += 1;
        let e1 = by_dist10.entry(key).or_insert((0.0, 0));
        e1.0 += acc10[y] / n_realizations as f64;
        e1.1 += 1;
    }
    let collect = |m: &std::collections::BTreeMap<i64, (f64, usize)>| {
        let ds: Vec<f64> = m.keys().map(|&d| d as f64).collect();
        let vs: Vec<f64> = m.values().map(|(s, c)| s / *c as f64).collect();
        (ds, vs)
    };
    let (ds, vs) = collect(&by_dist);
    let (ds10, vs10) = collect(&by_dist10);
    let onsite_mean = vs.first().copied().unwrap_or(0.0);
    Ok(FractionalMomentProbe {
        q,
        eta,
        fit: decay_fit(&ds, &vs),
        fit_eta10: decay_fit(&ds10, &vs10),
        onsite_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::diagonal_kernel;
    use crate::rng::{CounterRng, Stream};

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        let mut rng = CounterRng::new(seed, 0, Stream::Generic);
        let a = CMat::from_shape_fn((n, n), |_| {
            C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
        });
        linalg::hermitize(&a)
    }

    fn anderson_sd(m: usize, lambda: f64, seed: u64) -> SpectralData {
        let g = TorusGeometry::new(1, m).unwrap();
        let (omega, ids) = DisorderEnsemble::uniform_unit(seed).realize(g, 0);
        let h = build_anderson(g, &omega, &ids, -1, lambda).unwrap();
        eigendecompose(&h).unwrap()
    }

    #[test]
    fn identity_kernel_eigenvalues() {
        let g = TorusGeometry::new(1, 6).unwrap();
        let k = diagonal_kernel(Region::full(g), &vec![1.0; 6]).unwrap();
        let sd = eigendecompose(&k).unwrap();
        assert!(sd.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }

    #[test]
    fn residuals_small_on_random_kernel() {
        let g = TorusGeometry::new(1, 8).unwrap();
        let mut k = OperatorKernel::zeros(Region::full(g), 8);
        k.matrix = random_hermitian(8, 11);
        let sd = eigendecompose(&k).unwrap();
        let hnorm = linalg::op_norm(&k.matrix);
        for i in 0..8 {
            let v = sd.eigenvector(i);
            let hv = linalg::matvec(&k.matrix, &v);
            let lv = v.mapv(|z| z * C64::new(sd.eigenvalues[i], 0.0));
            let resid = linalg::vec_norm(&(&hv - &lv));
            assert!(resid <= 1e-12 * hnorm.max(1.0), "residual {resid}");
        }
    }

    #[test]
    fn projection_extremes_and_complement() {
        let sd = anderson_sd(10, 2.0, 3);
        let all = Interval::closed(sd.eigenvalues[0] - 1.0, sd.eigenvalues[9] + 1.0);
        let p = spectral_projection(&sd, &all);
        assert_eq!(p.rank, 10);
        assert!(linalg::op_norm(&(&p.matrix - &CMat::eye(10))) < 1e-12);
        let below = Interval::closed(sd.eigenvalues[0] - 2.0, sd.eigenvalues[0] - 1.0);
        let z = spectral_projection(&sd, &below);
        assert_eq!(z.rank, 0);
        assert!(linalg::op_norm(&z.matrix) < 1e-14);
        // P_J + P_{J^c} = 1
        let half = Interval::closed(sd.eigenvalues[0] - 1.0, sd.eigenvalues[4]);
        let p1 = spectral_projection(&sd, &half);
        let p2 = spectral_projection(&sd, &Interval::open(sd.eigenvalues[4], sd.eigenvalues[9] + 1.0));
        let sum = &p1.matrix + &p2.matrix;
        assert!(linalg::op_norm(&(&sum - &CMat::eye(10))) < 1e-10);
        assert!(p1.idempotency_defect() < 1e-12);
    }

    #[test]
    fn resolvent_identity_and_norm() {
        let sd = anderson_sd(12, 3.0, 5);
        let z = C64::new(sd.eigenvalues[3] + 0.7 * (sd.eigenvalues[4] - sd.eigenvalues[3]), 0.3);
        let r = resolvent(&sd, z).unwrap();
        // (H−z)R = 1
        let g = TorusGeometry::new(1, 12).unwrap();
        let (omega, ids) = DisorderEnsemble::uniform_unit(5).realize(g, 0);
        let h = build_anderson(g, &omega, &ids, -1, 3.0).unwrap();
        let mut hz = h.matrix.clone();
        for i in 0..12 {
            hz[(i, i)] -= z;
        }
        let prod = linalg::matmul(&hz, &r);
        assert!(linalg::op_norm(&(&prod - &CMat::eye(12))) < 1e-12);
        // ‖R_z‖ = 1/dist(z, σ)
        let expect = 1.0 / sd.dist_to_spectrum(z);
        assert!((linalg::op_norm(&r) - expect).abs() < 1e-10 * expect);
        // singularity guard
        assert!(resolvent(&sd, C64::new(sd.eigenvalues[0], 0.0)).is_err());
    }

    #[test]
    fn resolvent_bound_at_gap() {
        // ‖R_{E+ix}‖ ≤ (x²+Δ²)^{−1/2} with equality witness at the nearest
        // eigenvalue
        let sd = anderson_sd(10, 4.0, 7);
        let e = 0.5 * (sd.eigenvalues[4] + sd.eigenvalues[5]);
        let delta = sd.dist_to_spectrum(C64::new(e, 0.0));
        for &x in &[0.0, 0.2, 1.0] {
            let r = resolvent(&sd, C64::new(e, x)).unwrap();
            let bound = 1.0 / (x * x + delta * delta).sqrt();
            let norm = linalg::op_norm(&r);
            assert!(norm <= bound * (1.0 + 1e-10), "{norm} vs {bound}");
            // equality witness when the nearest eigenvalue realizes Δ
            let witness = 1.0
                / sd.eigenvalues
                    .iter()
                    .map(|&l| ((l - e) * (l - e) + x * x).sqrt())
                    .fold(f64::INFINITY, f64::min);
            assert!((norm - witness).abs() < 1e-10 * witness);
        }
    }

    #[test]
    fn kato_identity_on_gapped_instance() {
        let sd = anderson_sd(12, 5.0, 13);
        // put the window between eigenvalues 4|5 and 8|9
        let e1 = 0.5 * (sd.eigenvalues[4] + sd.eigenvalues[5]);
        let e2 = 0.5 * (sd.eigenvalues[8] + sd.eigenvalues[9]);
        let a = random_hermitian(12, 99);
        let x = kato_operator(&sd, &a, e1, e2).unwrap();
        let h = sd.function_of(|l| C64::new(l, 0.0));
        let p = spectral_projection(&sd, &Interval::closed(e1, e2)).matrix;
        let comm_hx = &linalg::matmul(&h, &x) - &linalg::matmul(&x, &h);
        let comm_pa = &linalg::matmul(&p, &a) - &linalg::matmul(&a, &p);
        let resid = linalg::op_norm(&(&comm_hx - &comm_pa));
        assert!(resid < 1e-10 * linalg::op_norm(&a), "kato residual {resid}");
        // norm bound ‖X_A‖ ≤ ‖A‖/Δ with dist ≥ 2Δ convention
        let gap = sd
            .dist_to_spectrum(C64::new(e1, 0.0))
            .min(sd.dist_to_spectrum(C64::new(e2, 0.0)));
        let delta = gap / 2.0;
        assert!(linalg::op_norm(&x) <= linalg::op_norm(&a) / delta * (1.0 + 1e-10));
    }

    #[test]
    fn kato_commuting_case() {
        // A commuting with H and P ⇒ X_A has zero commutator with H
        let sd = anderson_sd(8, 3.0, 21);
        let a = sd.function_of(|l| C64::new(l * l, 0.0)); // polynomial in H
        let e1 = 0.5 * (sd.eigenvalues[2] + sd.eigenvalues[3]);
        let e2 = 0.5 * (sd.eigenvalues[5] + sd.eigenvalues[6]);
        let x = kato_operator(&sd, &a, e1, e2).unwrap();
        let h = sd.function_of(|l| C64::new(l, 0.0));
        let comm = &linalg::matmul(&h, &x) - &linalg::matmul(&x, &h);
        assert!(linalg::op_norm(&comm) < 1e-10);
    }

    #[test]
    fn kato_matches_quadrature_oracle() {
        // independent check: tan-substitution quadrature of the double
        // resolvent integral
        let sd = anderson_sd(6, 4.0, 31);
        let e1 = 0.5 * (sd.eigenvalues[1] + sd.eigenvalues[2]);
        let e2 = 0.5 * (sd.eigenvalues[3] + sd.eigenvalues[4]);
        let a = random_hermitian(6, 5);
        let x = kato_operator(&sd, &a, e1, e2).unwrap();
        let nq = 20_000;
        let mut acc = CMat::zeros((6, 6));
        for i in 0..nq {
            let t = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * (i as f64 + 0.5) / nq as f64;
            let xq = t.tan();
            let jac = 1.0 / t.cos().powi(2);
            for (j, &ej) in [e1, e2].iter().enumerate() {
                let sign = if j == 0 { -1.0 } else { 1.0 };
                let r = resolvent(&sd, C64::new(ej, xq)).unwrap();
                let term = linalg::matmul(&r, &linalg::matmul(&a, &r));
                acc = &acc + &term.mapv(|z| z * C64::new(sign * jac, 0.0));
            }
        }
        let quad = acc.mapv(|z| z * C64::new(std::f64::consts::PI / nq as f64 / (2.0 * std::f64::consts::PI), 0.0));
        let diff = linalg::op_norm(&(&quad - &x));
        assert!(diff < 1e-4 * linalg::op_norm(&x).max(1.0), "quad diff {diff}");
    }

    #[test]
    fn weighted_norm_properties() {
        let g = TorusGeometry::new(1, 14).unwrap();
        let full = Region::full(g);
        let a = Region::from_sites(g, vec![0, 1]).unwrap();
        // diagonal K: weights cancel exactly
        let k = CMat::from_shape_fn((14, 14), |(i, j)| {
            if i == j {
                C64::new(1.0 + i as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let wn = weighted_norm(&k, &full, &a, 2.0, 4).unwrap();
        assert!((wn.value - 14.0).abs() < 1e-10);
        assert!(!wn.rescaled);
        // c=0 reduces to the plain norm
        let m = random_hermitian(14, 8);
        let wn0 = weighted_norm(&m, &full, &a, 0.0, 4).unwrap();
        assert!((wn0.value - linalg::op_norm(&m)).abs() < 1e-10);
    }

    #[test]
    fn weighted_norm_submultiplicative() {
        let g = TorusGeometry::new(1, 12).unwrap();
        let full = Region::full(g);
        let a = Region::from_sites(g, vec![3]).unwrap();
        for seed in 0..100 {
            let x = random_hermitian(12, 1000 + seed);
            let y = random_hermitian(12, 2000 + seed);
            let xy = linalg::matmul(&x, &y);
            let nx = weighted_norm(&x, &full, &a, 0.7, 4).unwrap().value;
            let ny = weighted_norm(&y, &full, &a, 0.7, 4).unwrap().value;
            let nxy = weighted_norm(&xy, &full, &a, 0.7, 4).unwrap().value;
            assert!(nxy <= nx * ny * (1.0 + 1e-10), "{nxy} > {nx}·{ny}");
        }
    }

    #[test]
    fn localization_delta_and_uniform() {
        let g = TorusGeometry::new(1, 9).unwrap();
        // diagonal kernel: eigenvectors are delta functions
        let vals: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let k = diagonal_kernel(Region::full(g), &vals).unwrap();
        let sd = eigendecompose(&k).unwrap();
        let rep = localization_report(&sd, 0.2, 4, 0.1, 1e-3).unwrap();
        for e in &rep.entries {
            assert!((e.mass - 1.0).abs() < 1e-12);
            assert!(e.bound_pass);
        }
        // uniform vector: free Laplacian ground state
        let h = build_anderson(g, &vec![0.0; 9], &vec![1; 9], -1, 0.0).unwrap();
        let sd2 = eigendecompose(&h).unwrap();
        let rep2 = localization_report(&sd2, 0.2, 4, 0.1, 1e-3).unwrap();
        let ground = &rep2.entries[0];
        assert!((ground.mass - 1.0 / 9.0).abs() < 1e-10);
        if let Some(f) = &ground.decay {
            assert!(f.slope.abs() < 1e-6);
        }
    }

    #[test]
    fn correlator_completeness_and_empty() {
        let sd = anderson_sd(10, 3.0, 17);
        let all = Interval::closed(sd.eigenvalues[0] - 1.0, sd.eigenvalues[9] + 1.0);
        for x in 0..10 {
            let q = eigenfunction_correlator(&sd, x, x, &all, 1e-9).unwrap();
            assert!(q >= 1.0 - 1e-12, "diagonal completeness {q}");
            // simple spectrum ⇒ equality
            assert!((q - 1.0).abs() < 1e-10);
        }
        let empty = Interval::closed(100.0, 101.0);
        assert_eq!(
            eigenfunction_correlator(&sd, 0, 3, &empty, 1e-9).unwrap(),
            0.0
        );
    }

    #[test]
    fn clean_system_statistics_degenerate() {
        // λ=0: deterministic spectrum → Wegner frequency is a 0/1 step
        let g = TorusGeometry::new(1, 8).unwrap();
        let ens = DisorderEnsemble::uniform_unit(1);
        let cfg = StatisticsConfig {
            lambda: 0.0,
            hopping_sign: -1,
            e_ref: 2.0 - 2.0 * (2.0 * std::f64::consts::PI / 8.0).cos(),
            j: Interval::closed(0.0, 4.0),
            nu_grid: vec![1e-9, 0.5],
            n_max: 2,
            n_realizations: 20,
        };
        let rec = disorder_statistics(&ens, g, &cfg).unwrap();
        // e_ref is exactly an eigenvalue: both frequencies are 1
        assert_eq!(rec.wegner[0].1, 1.0);
        assert_eq!(rec.wegner[1].1, 1.0);
        // IDOS over the full band = 1
        assert!((rec.idos_mean - 1.0).abs() < 1e-12);
        assert_eq!(rec.idos_stderr, 0.0);
    }

    #[test]
    fn fractional_moment_zero_distance_order_one() {
        let g = TorusGeometry::new(1, 16).unwrap();
        let theta = Region::full(g);
        let ens = DisorderEnsemble::uniform_unit(8);
        let probe =
            fractional_moment_probe(&ens, g, &theta, 4.0, 2.0, 1.0 / 3.0, 1e-3, 10, 0).unwrap();
        assert!(probe.onsite_mean > 0.05 && probe.onsite_mean < 100.0);
        assert!(probe.fit.is_some());
    }
}
