//! Disordered lattice Hamiltonians and the driven family H(s) = H + β·f(s)·W.
//!
//! Kernels are dense Hermitian matrices over a region's site list, tagged
//! with their interaction range. The sign convention for the kinetic term is
//! H = −Δ + λV: the discrete Laplacian Δ has −2d on the diagonal and +1 on
//! nearest-neighbor hops, so −Δ has spectrum [0, 4d] on the torus and the
//! one-dimensional clean band is [0, 4]. The intro convention H = Δ + V is
//! reachable through the hopping sign flag.

use crate::lattice::{Region, TorusGeometry};
use crate::numerics::jets::{smooth_switch_jet, Jet};
use crate::rng::{CounterRng, Stream};
use crate::{linalg, C64, CMat, LabError, Result};
use serde::{Deserialize, Serialize};

/// Dense Hermitian operator over a region, with declared interaction range.
#[derive(Clone, Debug)]
pub struct OperatorKernel {
    pub region: Region,
    pub matrix: CMat,
    pub range_r: usize,
    /// Disorder provenance per site (0 = clean): hash of (realization, site).
    pub disorder_ids: Vec<u64>,
}

impl OperatorKernel {
    pub fn zeros(region: Region, range_r: usize) -> Self {
        let n = region.len();
        OperatorKernel {
            region,
            matrix: CMat::zeros((n, n)),
            range_r,
            disorder_ids: vec![0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.region.len()
    }

    /// Set the pair (x, y) ↦ v and its mirror (y, x) ↦ v̄ in one step, so
    /// Hermiticity holds exactly as stored.
    pub fn set_pair(&mut self, x_local: usize, y_local: usize, v: C64) {
        self.matrix[(x_local, y_local)] = v;
        self.matrix[(y_local, x_local)] = v.conj();
    }

    pub fn add_diag(&mut self, x_local: usize, v: f64) {
        self.matrix[(x_local, x_local)] += C64::new(v, 0.0);
    }

    /// Checks Hermiticity (exact) and the range property against the torus
    /// distance.
    pub fn validate(&self) -> Result<()> {
        if linalg::herm_defect(&self.matrix) != 0.0 {
            return Err(LabError::Domain("kernel stored non-Hermitian".into()));
        }
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if self.matrix[(a, b)] != C64::new(0.0, 0.0) {
                    let d = self
                        .region
                        .geom
                        .distance(self.region.sites[a], self.region.sites[b]);
                    if d > self.range_r {
                        return Err(LabError::Domain(format!(
                            "entry at torus distance {d} exceeds range r={}",
                            self.range_r
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(&self.matrix)
    }

    /// Canonical restriction χ_Θ H χ_Θ to a sub-region.
    pub fn restrict(&self, theta: &Region) -> Result<OperatorKernel> {
        let locals: Vec<usize> = theta
            .sites
            .iter()
            .map(|&s| {
                self.region.local_index(s).ok_or_else(|| {
                    LabError::Domain(format!("site {s} outside the kernel region"))
                })
            })
            .collect::<Result<_>>()?;
        let n = locals.len();
        let matrix = CMat::from_shape_fn((n, n), |(i, j)| self.matrix[(locals[i], locals[j])]);
        let disorder_ids = locals.iter().map(|&l| self.disorder_ids[l]).collect();
        Ok(OperatorKernel {
            region: theta.clone(),
            matrix,
            range_r: self.range_r,
            disorder_ids,
        })
    }

    /// Kernel entry by global site index.
    pub fn entry(&self, x: usize, y: usize) -> Option<C64> {
        let a = self.region.local_index(x)?;
        let b = self.region.local_index(y)?;
        Some(self.matrix[(a, b)])
    }

    /// Nonzero structure as (row, col, value) triplets for sparse matvec.
    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::new();
        for ((i, j), &v) in self.matrix.indexed_iter() {
            if v != C64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
        out
    }
}

/// Disorder specification: i.i.d. site couplings, uniform on [0,1] by
/// default. Realization k is a pure function of (master seed, k).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DisorderEnsemble {
    pub master_seed: u64,
    /// Couplings are drawn uniform on [support.0, support.1].
    pub support: (f64, f64),
}

impl DisorderEnsemble {
    pub fn uniform_unit(master_seed: u64) -> Self {
        DisorderEnsemble {
            master_seed,
            support: (0.0, 1.0),
        }
    }

    /// Site couplings ω for realization k on a geometry, plus provenance ids.
    pub fn realize(&self, geom: TorusGeometry, k: u64) -> (Vec<f64>, Vec<u64>) {
        let mut rng = CounterRng::new(self.master_seed, k, Stream::Potential);
        let n = geom.site_count();
        let mut omega = Vec::with_capacity(n);
        let mut ids = Vec::with_capacity(n);
        for site in 0..n {
            omega.push(rng.uniform_in(self.support.0, self.support.1));
            // provenance id: nonzero hash of (realization, site)
            ids.push(
                0x9E37_79B9_7F4A_7C15u64
                    .wrapping_mul(k.wrapping_add(1))
                    .wrapping_add(site as u64 + 1),
            );
        }
        (omega, ids)
    }
}

/// Time profile of the driving.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum ProfileKind {
    /// C^∞ switch: 0 at s ≤ 0, 1 at s ≥ 1, all derivatives flat at both ends.
    SmoothSwitch,
    /// Hall ramp g(s): 0 for s ≤ s0, 1 for s ≥ 0, smooth in between.
    HallRamp { s0: f64 },
    /// Piecewise-linear samples; value only (derivatives unavailable, K = 0).
    Custom { samples: Vec<(f64, f64)> },
}

impl ProfileKind {
    /// Highest derivative order this profile can produce.
    pub fn max_order(&self) -> usize {
        match self {
            ProfileKind::Custom { .. } => 0,
            _ => 6,
        }
    }

    /// f^{(k)}(s).
    pub fn derivative(&self, s: f64, k: usize) -> Result<f64> {
        if k > self.max_order() {
            return Err(LabError::Capability(format!(
                "profile derivative order {k} exceeds cap {}",
                self.max_order()
            )));
        }
        Ok(match self {
            ProfileKind::SmoothSwitch => smooth_switch_jet(s, k).derivative(k),
            ProfileKind::HallRamp { s0 } => {
                // reparametrized switch on [s0, 0]
                assert!(*s0 < 0.0, "hall ramp needs s0 < 0");
                let scale = -1.0 / s0; // d(inner)/ds
                let inner = (s - s0) * scale;
                let j = smooth_switch_jet(inner, k);
                j.derivative(k) * scale.powi(k as i32)
            }
            ProfileKind::Custom { samples } => {
                let mut prev = samples.first().copied().unwrap_or((0.0, 0.0));
                if s <= prev.0 {
                    return Ok(prev.1);
                }
                for &pt in samples.iter().skip(1) {
                    if s <= pt.0 {
                        let t = (s - prev.0) / (pt.0 - prev.0);
                        return Ok(prev.1 + t * (pt.1 - prev.1));
                    }
                    prev = pt;
                }
                prev.1
            }
        })
    }

    /// Jet of the profile at s (orders above `max_order` are rejected).
    pub fn jet(&self, s: f64, order: usize) -> Result<Jet> {
        if order > self.max_order() {
            return Err(LabError::Capability(format!(
                "profile jet order {order} exceeds cap {}",
                self.max_order()
            )));
        }
        Ok(match self {
            ProfileKind::SmoothSwitch => smooth_switch_jet(s, order),
            ProfileKind::HallRamp { s0 } => {
                let scale = -1.0 / s0;
                let inner = (s - s0) * scale;
                let mut j = smooth_switch_jet(inner, order);
                for (k, c) in j.coeffs.iter_mut().enumerate() {
                    *c *= scale.powi(k as i32);
                }
                j
            }
            ProfileKind::Custom { .. } => Jet::constant(self.derivative(s, 0)?, order),
        })
    }
}

/// Driving protocol: spatial operator W modulated by a smooth profile.
#[derive(Clone, Debug)]
pub struct DrivingProtocol {
    pub profile: ProfileKind,
    pub w: OperatorKernel,
}

/// The family H(s) = H + β·f(s)·W with derivative evaluators.
#[derive(Clone, Debug)]
pub struct HamiltonianFamily {
    pub base: OperatorKernel,
    pub protocol: DrivingProtocol,
    pub beta: f64,
    /// Derivative order cap K.
    pub max_order: usize,
}

impl HamiltonianFamily {
    pub fn new(base: OperatorKernel, protocol: DrivingProtocol, beta: f64) -> Result<Self> {
        if base.region != protocol.w.region {
            return Err(LabError::Domain(
                "base and driving operators live on different regions".into(),
            ));
        }
        let max_order = protocol.profile.max_order();
        Ok(HamiltonianFamily {
            base,
            protocol,
            beta,
            max_order,
        })
    }

    /// Static family (β = 0) from a bare kernel.
    pub fn static_family(base: OperatorKernel) -> Self {
        let w = OperatorKernel::zeros(base.region.clone(), 0);
        HamiltonianFamily {
            protocol: DrivingProtocol {
                profile: ProfileKind::SmoothSwitch,
                w,
            },
            base,
            beta: 0.0,
            max_order: 6,
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Time interval the driving profile is defined on.
    pub fn time_range(&self) -> (f64, f64) {
        match self.protocol.profile {
            ProfileKind::HallRamp { .. } => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// H^{(k)}(s): k = 0 gives H + β f(s) W, k ≥ 1 gives β f^{(k)}(s) W.
    pub fn at(&self, s: f64, k: usize) -> Result<OperatorKernel> {
        let (lo, hi) = self.time_range();
        if !(lo..=hi).contains(&s) {
            return Err(LabError::Domain(format!(
                "time s={s} outside [{lo},{hi}]"
            )));
        }
        if k > self.max_order {
            return Err(LabError::Capability(format!(
                "derivative order {k} exceeds family cap {}",
                self.max_order
            )));
        }
        let f_k = self.protocol.profile.derivative(s, k)?;
        let mut out = if k == 0 {
            self.base.clone()
        } else {
            OperatorKernel::zeros(self.base.region.clone(), self.protocol.w.range_r)
        };
        if self.beta != 0.0 {
            let scale = C64::new(self.beta * f_k, 0.0);
            out.matrix = &out.matrix + &self.protocol.w.matrix.mapv(|z| z * scale);
            out.range_r = out.range_r.max(self.protocol.w.range_r);
        }
        Ok(out)
    }

    /// Scalar coupling c(s) = β f(s) and its derivatives as a jet.
    pub fn coupling_jet(&self, s: f64, order: usize) -> Result<Jet> {
        Ok(self.protocol.profile.jet(s, order)?.scale(self.beta))
    }

    /// Restriction of the whole family to a sub-region.
    pub fn restrict(&self, theta: &Region) -> Result<HamiltonianFamily> {
        Ok(HamiltonianFamily {
            base: self.base.restrict(theta)?,
            protocol: DrivingProtocol {
                profile: self.protocol.profile.clone(),
                w: self.protocol.w.restrict(theta)?,
            },
            beta: self.beta,
            max_order: self.max_order,
        })
    }
}

/// Anderson Hamiltonian on a torus: sign·(−Δ) + λ·diag(ω), range 1.
///
/// `hopping_sign = -1` gives H = −Δ + λV (clean band [0, 4d]); `+1` gives
/// H = Δ + λV.
pub fn build_anderson(
    geom: TorusGeometry,
    omega: &[f64],
    ids: &[u64],
    hopping_sign: i32,
    lambda: f64,
) -> Result<OperatorKernel> {
    if omega.len() != geom.site_count() {
        return Err(LabError::Domain(
            "disorder vector length must match the torus".into(),
        ));
    }
    let region = Region::full(geom);
    let mut k = OperatorKernel::zeros(region, 1);
    let sign = hopping_sign.signum() as f64;
    let n = geom.site_count();
    for x in 0..n {
        // −Δ diagonal is +2d; Δ diagonal is −2d
        k.add_diag(x, -sign * 2.0 * geom.d as f64 + lambda * omega[x]);
        let coords = geom.coords_of(x);
        for axis in 0..geom.d {
            let mut nb = coords.clone();
            nb[axis] = (nb[axis] + 1) % geom.m;
            let y = geom.index_of(&nb);
            if y != x {
                // −Δ hop is −1; Δ hop is +1
                let lx = k.region.local_index(x).unwrap();
                let ly = k.region.local_index(y).unwrap();
                k.set_pair(lx, ly, C64::new(sign, 0.0));
            } else {
                // M = 1 along this axis: the hop wraps onto the diagonal
                k.add_diag(x, 2.0 * sign);
            }
        }
    }
    k.disorder_ids = ids.to_vec();
    Ok(k)
}

/// Diagonal potential kernel from per-site values.
pub fn diagonal_kernel(region: Region, values: &[f64]) -> Result<OperatorKernel> {
    if values.len() != region.len() {
        return Err(LabError::Domain("diagonal length mismatch".into()));
    }
    let mut k = OperatorKernel::zeros(region, 0);
    for (i, &v) in values.iter().enumerate() {
        k.add_diag(i, v);
    }
    Ok(k)
}

/// Translation-invariant stencil on ℤ^d: offset → amplitude.
#[derive(Clone, Debug)]
pub struct Stencil {
    pub d: usize,
    pub terms: Vec<(Vec<i64>, C64)>,
}

impl Stencil {
    pub fn range(&self) -> usize {
        self.terms
            .iter()
            .map(|(o, _)| {
                o.iter().map(|&c| c.unsigned_abs() as usize).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Fourier symbol Σ_o h(o)·e^{i·k·o} at k = 2π·n/M.
    pub fn symbol(&self, n: &[usize], m: usize) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (o, amp) in &self.terms {
            let phase: f64 = o
                .iter()
                .zip(n)
                .map(|(&oi, &ni)| 2.0 * std::f64::consts::PI * ni as f64 * oi as f64 / m as f64)
                .sum();
            acc += amp * C64::new(0.0, phase).exp();
        }
        acc
    }
}

/// Periodization H^T(x,y) = Σ_{k∈Mℤ^d} h(y−x+k) of a translation-invariant
/// stencil onto the torus. Requires range r < M/2 so at most one image of
/// each pair contributes.
pub fn periodize(stencil: &Stencil, geom: TorusGeometry) -> Result<OperatorKernel> {
    let r = stencil.range();
    if 2 * r >= geom.m {
        return Err(LabError::Config(format!(
            "stencil range {r} ≥ M/2 aliases under periodization"
        )));
    }
    let region = Region::full(geom);
    let n = geom.site_count();
    let mut k = OperatorKernel::zeros(region, r);
    for x in 0..n {
        let cx = geom.coords_of(x);
        for (o, amp) in &stencil.terms {
            let cy: Vec<usize> = cx
                .iter()
                .zip(o)
                .map(|(&c, &oi)| (c as i64 + oi).rem_euclid(geom.m as i64) as usize)
                .collect();
            let y = geom.index_of(&cy);
            k.matrix[(x, y)] += *amp;
        }
    }
    // wrapped stencils must come out Hermitian; verify, then store exactly
    let defect = linalg::herm_defect(&k.matrix);
    if defect > 1e-14 {
        return Err(LabError::Domain(format!(
            "stencil is not Hermitian after periodization (defect {defect:.2e})"
        )));
    }
    k.matrix = linalg::hermitize(&k.matrix);
    Ok(k)
}

/// Nearest-neighbor stencil for −Δ (diag 2d, hops −1).
pub fn minus_laplacian_stencil(d: usize) -> Stencil {
    let mut terms = vec![(vec![0i64; d], C64::new(2.0 * d as f64, 0.0))];
    for axis in 0..d {
        for sgn in [-1i64, 1] {
            let mut o = vec![0i64; d];
            o[axis] = sgn;
            terms.push((o, C64::new(-1.0, 0.0)));
        }
    }
    Stencil { d, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;

    fn geom1(m: usize) -> TorusGeometry {
        TorusGeometry::new(1, m).unwrap()
    }

    #[test]
    fn anderson_single_site_dirichlet() {
        // 1 site cut out of a larger torus: −Δ diagonal is 2
        let g = geom1(8);
        let h = build_anderson(g, &vec![0.0; 8], &vec![1; 8], -1, 1.0).unwrap();
        let theta = Region::from_sites(g, vec![3]).unwrap();
        let r = h.restrict(&theta).unwrap();
        assert_eq!(r.matrix[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn anderson_two_site_dirichlet_spectrum() {
        // closed form 2−2cos(kπ/(n+1)), k=1,2 → {1, 3}
        let g = geom1(8);
        let h = build_anderson(g, &vec![0.0; 8], &vec![1; 8], -1, 1.0).unwrap();
        let theta = Region::from_sites(g, vec![3, 4]).unwrap();
        let r = h.restrict(&theta).unwrap();
        let (vals, _) = eigh(&r.matrix).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn clean_band_within_0_4() {
        let g = geom1(32);
        let h = build_anderson(g, &vec![0.0; 32], &vec![1; 32], -1, 0.0).unwrap();
        let (vals, _) = eigh(&h.matrix).unwrap();
        assert!(vals[0] > -1e-12 && vals[31] < 4.0 + 1e-12);
        // torus eigenvalues 2−2cos(2πk/M) include the bottom band edge
        assert!(vals[0].abs() < 1e-12);
    }

    #[test]
    fn kernel_validates_range_and_hermiticity() {
        let g = geom1(10);
        let (omega, ids) = DisorderEnsemble::uniform_unit(5).realize(g, 0);
        let h = build_anderson(g, &omega, &ids, -1, 3.0).unwrap();
        h.validate().unwrap();
        let mut bad = h.clone();
        bad.matrix[(0, 5)] = C64::new(1.0, 0.0);
        bad.matrix[(5, 0)] = C64::new(1.0, 0.0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn restrict_identity_and_blocks() {
        let g = geom1(12);
        let (omega, ids) = DisorderEnsemble::uniform_unit(9).realize(g, 1);
        let h = build_anderson(g, &omega, &ids, -1, 2.0).unwrap();
        let full = h.restrict(&Region::full(g)).unwrap();
        assert_eq!(full.matrix, h.matrix);
        // disjoint pieces at distance > r produce a block-diagonal kernel
        let a = Region::from_sites(g, vec![0, 1, 2]).unwrap();
        let b = Region::from_sites(g, vec![6, 7, 8]).unwrap();
        let ab = h.restrict(&a.union(&b)).unwrap();
        for i in 0..3 {
            for j in 3..6 {
                assert_eq!(ab.matrix[(i, j)], C64::new(0.0, 0.0));
            }
        }
        // and shares no disorder variables across the blocks
        let ida: Vec<u64> = ab.disorder_ids[..3].to_vec();
        let idb: Vec<u64> = ab.disorder_ids[3..].to_vec();
        assert!(ida.iter().all(|x| !idb.contains(x)));
    }

    #[test]
    fn determinism_same_seed_same_kernel() {
        let g = geom1(16);
        let ens = DisorderEnsemble::uniform_unit(77);
        let (o1, i1) = ens.realize(g, 4);
        let (o2, i2) = ens.realize(g, 4);
        assert_eq!(o1, o2);
        assert_eq!(i1, i2);
        let h1 = build_anderson(g, &o1, &i1, -1, 5.0).unwrap();
        let h2 = build_anderson(g, &o2, &i2, -1, 5.0).unwrap();
        assert_eq!(h1.matrix, h2.matrix);
    }

    #[test]
    fn periodize_wrap_and_diagonal() {
        let g = geom1(4);
        let st = minus_laplacian_stencil(1);
        let k = periodize(&st, g).unwrap();
        // wrap hop present
        assert_eq!(k.matrix[(0, 3)], C64::new(-1.0, 0.0));
        // diagonal potential unchanged by periodization
        let pot = Stencil {
            d: 1,
            terms: vec![(vec![0], C64::new(1.5, 0.0))],
        };
        let kp = periodize(&pot, g).unwrap();
        assert!(kp.matrix.indexed_iter().all(|((i, j), &v)| if i == j {
            v == C64::new(1.5, 0.0)
        } else {
            v == C64::new(0.0, 0.0)
        }));
        // aliasing guard
        let g2 = geom1(2);
        assert!(periodize(&st, g2).is_err());
    }

    #[test]
    fn periodized_spectrum_matches_symbol() {
        let g = geom1(12);
        let st = minus_laplacian_stencil(1);
        let k = periodize(&st, g).unwrap();
        let (vals, _) = eigh(&k.matrix).unwrap();
        let mut sym: Vec<f64> = (0..12).map(|n| st.symbol(&[n], 12).re).collect();
        sym.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, s) in vals.iter().zip(&sym) {
            assert!((v - s).abs() < 1e-12, "{v} vs {s}");
        }
    }

    #[test]
    fn family_endpoints_and_derivatives() {
        let g = geom1(10);
        let (omega, ids) = DisorderEnsemble::uniform_unit(3).realize(g, 0);
        let h = build_anderson(g, &omega, &ids, -1, 4.0).unwrap();
        let w = diagonal_kernel(Region::full(g), &vec![1.0; 10]).unwrap();
        let fam = HamiltonianFamily::new(
            h.clone(),
            DrivingProtocol {
                profile: ProfileKind::SmoothSwitch,
                w,
            },
            0.3,
        )
        .unwrap();
        // s=0: profile(0)=0 → base exactly
        assert_eq!(fam.at(0.0, 0).unwrap().matrix, h.matrix);
        // k=1 at s=0: flat endpoint → zero kernel
        assert!(linalg::max_abs_entry(&fam.at(0.0, 1).unwrap().matrix) == 0.0);
        // k beyond cap rejected
        assert!(fam.at(0.5, 7).is_err());
        // β=0 → H(s) = H for all s
        let fam0 = HamiltonianFamily::static_family(h.clone());
        assert_eq!(fam0.at(0.7, 0).unwrap().matrix, h.matrix);
        // s=1: full driving
        let h1 = fam.at(1.0, 0).unwrap();
        let expect = &h.matrix + &(CMat::eye(10).mapv(|z| z * C64::new(0.3, 0.0)));
        assert!(linalg::max_abs_entry(&(&h1.matrix - &expect)) < 1e-15);
    }

    #[test]
    fn hall_ramp_profile() {
        let p = ProfileKind::HallRamp { s0: -0.8 };
        assert_eq!(p.derivative(-1.0, 0).unwrap(), 0.0);
        assert_eq!(p.derivative(-0.8, 0).unwrap(), 0.0);
        assert_eq!(p.derivative(0.0, 0).unwrap(), 1.0);
        assert_eq!(p.derivative(0.5, 0).unwrap(), 1.0);
        assert_eq!(p.derivative(0.5, 1).unwrap(), 0.0);
        let mid = p.derivative(-0.4, 0).unwrap();
        assert!(mid > 0.0 && mid < 1.0);
    }
}
